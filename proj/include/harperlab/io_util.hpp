#pragma once

#include <string>
#include <vector>

namespace harperlab {

// Shortest round-trip formatting (%.17g) so emitted numbers are
// byte-stable and re-parse to the same double.
std::string fmt_double(double x);

void ensure_dir(const std::string& path);
// Write-to-temp then rename; the destination is never seen half-written.
void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string join_path(const std::string& a, const std::string& b);

}  // namespace harperlab
