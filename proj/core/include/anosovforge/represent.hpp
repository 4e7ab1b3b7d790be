#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "anosovforge/freegroup.hpp"
#include "anosovforge/spectral.hpp"

namespace anosov {

/// Generator -> matrix assignment with exact det-1 images and a
/// prefix-memoized evaluation cache (shared between copies, thread safe).
class Representation {
 public:
  Representation(GeneratorSet gens, std::vector<RatMat3> images);

  const GeneratorSet& generators() const { return gens_; }
  int rank() const { return gens_.rank; }
  const std::vector<RatMat3>& images() const { return images_; }
  const RatMat3& image(int letter_index) const;  // 0-based generator index

  /// Exact product of generator images along a reduced word.
  RatMat3 evaluate(const Word& w) const;

 private:
  GeneratorSet gens_;
  std::vector<RatMat3> images_;
  std::vector<RatMat3> inverse_images_;
  struct Cache {
    std::mutex mu;
    std::map<Word, RatMat3> memo;
  };
  std::shared_ptr<Cache> cache_;
};

/// Double-precision representation; used for perturbed snapshots and the
/// flag-dynamics layer where entries are irrational by construction.
struct FloatRep {
  GeneratorSet gens;
  std::vector<Mat3d> images;

  Mat3d evaluate(const Word& w) const;
};

FloatRep to_float(const Representation& rep);

/// Per-length minima of log s1 and of the first singular gap, with
/// argmin witnesses and least-squares slopes fitted over lengths 2..N.
struct GrowthProfile {
  int max_length = 0;
  bool exhaustive = true;
  std::vector<double> min_log_s1;  // index = word length, 0..N
  std::vector<double> min_gap;     // log s1 - log s2
  std::vector<Word> witness_s1;
  std::vector<Word> witness_gap;
  double slope_s1 = 0, intercept_s1 = 0;
  double slope_gap = 0, intercept_gap = 0;
};

/// Hard cap on exhaustive sweeps; beyond it the profile refuses instead
/// of silently subsampling.
inline constexpr unsigned long long kProfileWordCap = 10'000'000ull;

struct ProfileOptions {
  int workers = 1;
  bool sample = false;           // non-exhaustive mode, labeled in output
  int samples_per_length = 4096;
  unsigned long long seed = 0;
};

GrowthProfile qi_profile(const Representation& rep, int max_length,
                         const ProfileOptions& opts = {});
GrowthProfile anosov_gap_profile(const Representation& rep, int max_length,
                                 const ProfileOptions& opts = {});

/// True iff charpoly of rho(w) has exact negative discriminant (one real
/// root and a complex-conjugate pair); obstructs Anosov-ness nearby.
bool nonreal_spectrum_witness(const Representation& rep, const Word& w);

/// All reduced words 1 <= |w| <= N with unipotent non-identity image,
/// exact test. Nonempty output certifies rho is not quasi-isometric.
std::vector<std::pair<Word, RatMat3>> unipotent_scan(const Representation& rep,
                                                     int max_length);

/// Float-layer scan for perturbed snapshots: accepts w when
/// ||(M-I)^3||_F / max(1, ||M||_F^3) <= tol.
std::vector<std::pair<Word, Mat3d>> unipotent_scan_float(const FloatRep& rep,
                                                         int max_length,
                                                         double tol);

double unipotent_residual(const Mat3d& m);

}  // namespace anosov
