#pragma once

namespace spinthermal {

inline constexpr char kVersion[] = "0.1.0";
inline constexpr char kToolName[] = "spinthermal";

}  // namespace spinthermal
