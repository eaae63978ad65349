#pragma once

#include <string>
#include <vector>

#include "okamoto/dynamics.hpp"

namespace okamoto {

// Kinds: slice, orbit-tree, thickness, certify-slice3, bonacci-verify, bonacci-null-infinite,
// bonacci-c2, dimension. Missing params are filled with defaults and echoed under "params".
Json make_certificate(const std::string& kind, const Json& params);

// Exit status 0 when the certificate makes a certified claim, else 2.
bool is_certified(const Json& cert);

struct CheckReport {
  bool valid = false;
  std::vector<std::string> problems;
  Json to_json() const;
};

// Recomputes the certificate from its params and re-validates it independently where an oracle exists.
CheckReport check(const Json& cert);

// 1 for malformed input, 2 for errors that only mean "not certified".
int exit_code_for(const Error& e);

}  // namespace okamoto
