#pragma once

namespace regimecast {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Interchange schema tags embedded in stage files. A reader that expects
// one tag and finds another raises a version error instead of guessing.
inline constexpr const char* kCandlesSchema     = "regimecast-candles/v1";
inline constexpr const char* kReturnsSchema     = "regimecast-returns/v1";
inline constexpr const char* kDecisionsSchema   = "regimecast-decisions/v1";
inline constexpr const char* kFeaturesSchema    = "regimecast-features/v1";
inline constexpr const char* kGmmSchema         = "regimecast-gmm/v1";
inline constexpr const char* kAssignmentsSchema = "regimecast-assignments/v1";
inline constexpr const char* kBicCurveSchema    = "regimecast-bic/v1";
inline constexpr const char* kProfileSchema     = "regimecast-profile/v1";
inline constexpr const char* kModelSchema       = "regimecast-model/v1";
inline constexpr const char* kPredictionsSchema = "regimecast-predictions/v1";
inline constexpr const char* kReportSchema      = "regimecast-report/v1";
inline constexpr const char* kManifestSchema    = "regimecast-manifest/v1";

}  // namespace regimecast
