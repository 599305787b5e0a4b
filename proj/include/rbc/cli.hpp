#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rbc/image.hpp"
#include "rbc/radon.hpp"

namespace rbc::cli {

/// "equidistant:<n>" or a comma-separated list of degrees.
AngleSet parse_angle_spec(std::string_view spec);

/// Loads a file, or builds a phantom for "phantom:<kind>", then normalizes
/// to size x size.
GrayImage load_working_image(const std::string& source, std::size_t size);

/// Working size from $RBC_SIZE, else 32.
std::size_t default_size();

/// Entry point behind the `rbc` executable. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbc::cli
