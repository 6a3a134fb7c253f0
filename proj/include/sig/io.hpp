#pragma once

#include <fstream>
#include <string>

#include "sig/errors.hpp"

namespace sig {

/// Shortest text form that round-trips a double exactly (17 significant
/// digits); all numeric file output goes through this.
[[nodiscard]] std::string fmt_g17(double v);

/// Opens path for writing, creating parent directories; raises IoError.
[[nodiscard]] std::ofstream open_out(const std::string& path);

/// create_directories wrapper with IoError reporting.
void ensure_dir(const std::string& path);

} // namespace sig
