#pragma once

namespace qed {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qed
