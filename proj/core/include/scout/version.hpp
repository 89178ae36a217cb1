#pragma once

namespace scout {

inline constexpr const char* kToolVersion = "0.1.0";

// On-disk format versions. Readers accept files whose major version matches
// and whose minor version is not newer than the reader's.
inline constexpr int kWorldFormatMajor = 1;
inline constexpr int kWorldFormatMinor = 0;

inline constexpr int kModelFormatMajor = 1;
inline constexpr int kModelFormatMinor = 0;

}  // namespace scout
