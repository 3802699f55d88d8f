#include "fracsynth/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracsynth/parallel.hpp"

namespace fracsynth {

const char *to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCatalogue: return "EmptyCatalogue";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PlanMismatch: return "PlanMismatch";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SingleFrame: return "SingleFrame";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::ZeroNoise: return "ZeroNoise";
    case ErrorCode::FitFailure: return "FitFailure";
    case ErrorCode::TooFewFits: return "TooFewFits";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fracsynth
