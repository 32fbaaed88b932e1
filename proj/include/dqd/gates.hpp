#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqd/linalg.hpp"

namespace dqd::gates {

/// Standard computational-basis matrices. Two-qubit gates use qubit 0 as the
/// most significant bit; "CX"/"CX_01" is controlled on qubit 0, "CX_10" on
/// qubit 1.
std::optional<ComplexMatrix> reference_unitary(std::string_view name);

/// Maps aliases to the stored library name ("CX" -> "CX_01").
std::string canonical_name(std::string_view name);

/// Names compiled by the standard library build.
const std::vector<std::string>& standard_names();

ComplexMatrix ry(double theta);

}  // namespace dqd::gates
