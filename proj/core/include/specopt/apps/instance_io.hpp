#pragma once

#include <string>

#include "specopt/apps/gen_sdp.hpp"
#include "specopt/apps/qcqp.hpp"

namespace specopt::apps {

/// Current instance schema version. Matrices are stored row-major.
inline constexpr int kInstanceSchemaVersion = 1;

std::string to_json(const GenSdpInstance& inst);
std::string to_json(const QcqpInstance& inst);

/// Throw DomainError on a malformed document or unsupported version.
GenSdpInstance gen_sdp_from_json(const std::string& text);
QcqpInstance qcqp_from_json(const std::string& text);

}  // namespace specopt::apps
