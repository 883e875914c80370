#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gkrs::cli {

/// Exit codes: 0 success, 1 a check failed, 2 usage or parse error,
/// 3 domain violation.
enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kDomain = 3 };

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkrs::cli
