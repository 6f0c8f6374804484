#pragma once

#include <ostream>

namespace qfp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kBudget = 2;
inline constexpr int kInvalid = 3;
inline constexpr int kUnknownCommand = 64;
inline constexpr int kMalformedPencil = 65;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfp::cli
