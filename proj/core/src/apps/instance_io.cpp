#include "specopt/apps/instance_io.hpp"

#include <json.hpp>

#include "specopt/errors.hpp"

namespace specopt::apps {

namespace {

using json = nlohmann::ordered_json;
using Eigen::Index;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix parse_matrix(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw DomainError("instance: matrix has wrong row count");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw DomainError("instance: matrix has wrong column count");
    }
    for (Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<size_t>(k)].get<double>();
  }
  return m;
}

Vector parse_vector(const json& j, Index size) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    throw DomainError("instance: vector has wrong length");
  }
  Vector v(size);
  for (Index i = 0; i < size; ++i) v(i) = j[static_cast<size_t>(i)].get<double>();
  return v;
}

json parse_checked(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("instance: ") + e.what());
  }
  if (j.value("version", 0) != kInstanceSchemaVersion) {
    throw DomainError("instance: unsupported schema version");
  }
  if (j.value("kind", std::string()) != kind) {
    throw DomainError(std::string("instance: expected kind ") + kind);
  }
  return j;
}

}  // namespace

std::string to_json(const GenSdpInstance& inst) {
  json j;
  j["version"] = kInstanceSchemaVersion;
  j["kind"] = "gensdp";
  j["seed"] = inst.seed;
  j["n"] = inst.n;
  j["s"] = inst.s;
  json a = json::array();
  for (const Matrix& m : inst.a) a.push_back(matrix_json(m));
  j["A"] = std::move(a);
  j["ell"] = vector_json(inst.ell);
  j["b"] = vector_json(inst.b);
  j["C"] = matrix_json(inst.c);
  j["f_star"] = inst.f_star;
  return j.dump(1);
}

std::string to_json(const QcqpInstance& inst) {
  json j;
  j["version"] = kInstanceSchemaVersion;
  j["kind"] = "qcqp";
  j["seed"] = inst.seed;
  j["m"] = inst.m;
  json a = json::array();
  for (const Matrix& m : inst.a) a.push_back(matrix_json(m));
  j["A"] = std::move(a);
  return j.dump(1);
}

GenSdpInstance gen_sdp_from_json(const std::string& text) {
  const json j = parse_checked(text, "gensdp");
  try {
    GenSdpInstance inst;
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.n = j.at("n").get<Index>();
    inst.s = j.at("s").get<Index>();
    const json& a = j.at("A");
    if (!a.is_array() || static_cast<Index>(a.size()) != inst.s) {
      throw DomainError("instance: A has wrong length");
    }
    for (const json& m : a) inst.a.push_back(parse_matrix(m, inst.n, inst.n));
    inst.ell = parse_vector(j.at("ell"), inst.s);
    inst.b = parse_vector(j.at("b"), inst.n);
    inst.c = parse_matrix(j.at("C"), inst.n, inst.n);
    inst.f_star = j.at("f_star").get<double>();
    return inst;
  } catch (const json::exception& e) {
    throw DomainError(std::string("instance: ") + e.what());
  }
}

QcqpInstance qcqp_from_json(const std::string& text) {
  const json j = parse_checked(text, "qcqp");
  try {
    QcqpInstance inst;
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.m = j.at("m").get<Index>();
    const json& a = j.at("A");
    if (!a.is_array() || static_cast<Index>(a.size()) != inst.m) {
      throw DomainError("instance: A has wrong length");
    }
    for (const json& m : a) inst.a.push_back(parse_matrix(m, 2, 2));
    return inst;
  } catch (const json::exception& e) {
    throw DomainError(std::string("instance: ") + e.what());
  }
}

}  // namespace specopt::apps
