#include "specopt/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "specopt/errors.hpp"

namespace specopt {

namespace {

Phase parse_phase(const std::string& s) {
  if (s == "Y") return Phase::kY;
  if (s == "X") return Phase::kX;
  if (s == "JOINT") return Phase::kJoint;
  throw DomainError("trace: unknown phase '" + s + "'");
}

SolveStatus parse_status(const std::string& s) {
  if (s == "KKT") return SolveStatus::kKkt;
  if (s == "cap") return SolveStatus::kCap;
  if (s == "stalled") return SolveStatus::kStalled;
  throw DomainError("trace: unknown status '" + s + "'");
}

ProjectionMethod parse_method(const std::string& s) {
  for (auto m : {ProjectionMethod::kIdentity, ProjectionMethod::kPolyhedral,
                 ProjectionMethod::kAlternating, ProjectionMethod::kPenalty}) {
    if (s == to_string(m)) return m;
  }
  throw DomainError("trace: unknown projection '" + s + "'");
}

}  // namespace

void write_trace_jsonl(const SolverTrace& trace, std::ostream& out,
                       const std::string& run_id) {
  for (const TraceRecord& r : trace.records) {
    nlohmann::ordered_json j;
    if (!run_id.empty()) j["run"] = run_id;
    j["iter"] = r.iteration;
    j["phase"] = to_string(r.phase);
    j["measure"] = r.measure;
    j["t"] = r.t;
    j["backtracks"] = r.backtracks;
    j["f_before"] = r.f_before;
    j["f"] = r.f;
    j["residual_eq"] = r.residual_eq;
    j["residual_ineq"] = r.residual_ineq;
    j["projection"] = to_string(r.projection);
    out << j.dump() << '\n';
  }
  nlohmann::ordered_json tail;
  if (!run_id.empty()) tail["run"] = run_id;
  tail["status"] = to_string(trace.status);
  tail["diagnostic"] = trace.diagnostic;
  out << tail.dump() << '\n';
}

void write_trace_jsonl(const SolverTrace& trace, const std::string& path,
                       const std::string& run_id) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open trace file " + path);
  write_trace_jsonl(trace, out, run_id);
}

SolverTrace read_trace_jsonl(std::istream& in) {
  SolverTrace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("status")) {
      trace.status = parse_status(j.at("status").get<std::string>());
      trace.diagnostic = j.value("diagnostic", std::string());
      continue;
    }
    TraceRecord r;
    r.iteration = j.at("iter").get<int>();
    r.phase = parse_phase(j.at("phase").get<std::string>());
    r.measure = j.at("measure").get<double>();
    r.t = j.at("t").get<double>();
    r.backtracks = j.at("backtracks").get<int>();
    r.f_before = j.at("f_before").get<double>();
    r.f = j.at("f").get<double>();
    r.residual_eq = j.at("residual_eq").get<double>();
    r.residual_ineq = j.at("residual_ineq").get<double>();
    r.projection = parse_method(j.at("projection").get<std::string>());
    trace.records.push_back(r);
  }
  return trace;
}

}  // namespace specopt
