#pragma once

namespace harperlab {

// Full command-line entry point. Returns the process exit status:
// 0 success, 1 computation failure, 2 usage error.
int dispatch(int argc, const char* const* argv);

}  // namespace harperlab
