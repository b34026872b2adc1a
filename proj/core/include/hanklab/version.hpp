#pragma once

#include <string_view>

namespace hanklab {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

}  // namespace hanklab
