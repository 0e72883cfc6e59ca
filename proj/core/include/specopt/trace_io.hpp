#pragma once

#include <iosfwd>
#include <string>

#include "specopt/solver.hpp"

namespace specopt {

/// One JSON object per record, newline separated.
void write_trace_jsonl(const SolverTrace& trace, std::ostream& out,
                       const std::string& run_id = {});
void write_trace_jsonl(const SolverTrace& trace, const std::string& path,
                       const std::string& run_id = {});

/// Reads back a stream produced by write_trace_jsonl (run_id is ignored).
SolverTrace read_trace_jsonl(std::istream& in);

}  // namespace specopt
