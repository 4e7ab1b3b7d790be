#include "anosovforge/represent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace anosov {

Representation::Representation(GeneratorSet gens, std::vector<RatMat3> images)
    : gens_(std::move(gens)),
      images_(std::move(images)),
      cache_(std::make_shared<Cache>()) {
  gens_.validate();
  if (images_.size() != static_cast<size_t>(gens_.rank))
    throw std::invalid_argument("Representation: one image per generator");
  for (const RatMat3& m : images_) {
    if (det3(m) != 1)
      throw std::invalid_argument("Representation: image determinant must be 1");
    inverse_images_.push_back(inv3(m));
  }
}

const RatMat3& Representation::image(int letter_index) const {
  return images_.at(static_cast<size_t>(letter_index));
}

RatMat3 Representation::evaluate(const Word& w) const {
  for (int32_t x : w)
    if (x == 0 || x > gens_.rank || x < -gens_.rank)
      throw std::invalid_argument("evaluate: letter outside the generator range");

  std::lock_guard<std::mutex> lock(cache_->mu);
  // Longest cached prefix, then extend letter by letter, caching each prefix.
  size_t start = w.size();
  RatMat3 acc = RatMat3::identity();
  for (size_t len = w.size(); len > 0; --len) {
    const Word prefix(w.begin(), w.begin() + static_cast<long>(len));
    auto it = cache_->memo.find(prefix);
    if (it != cache_->memo.end()) {
      acc = it->second;
      start = w.size() - len;
      break;
    }
    start = w.size();
  }
  size_t done = w.size() - start;
  for (size_t i = done; i < w.size(); ++i) {
    const int32_t x = w[i];
    const RatMat3& step = x > 0 ? images_[static_cast<size_t>(x - 1)]
                                : inverse_images_[static_cast<size_t>(-x - 1)];
    acc = mul3(acc, step);
    cache_->memo.emplace(Word(w.begin(), w.begin() + static_cast<long>(i) + 1), acc);
  }
  return acc;
}

Mat3d FloatRep::evaluate(const Word& w) const {
  Mat3d acc = Mat3d::identity();
  for (int32_t x : w) {
    const Mat3d& img = images.at(static_cast<size_t>((x > 0 ? x : -x) - 1));
    acc = mul(acc, x > 0 ? img : inverse(img));
  }
  return acc;
}

FloatRep to_float(const Representation& rep) {
  FloatRep f;
  f.gens = rep.generators();
  for (const RatMat3& m : rep.images()) f.images.push_back(to_double(m));
  return f;
}

namespace {

struct Mins {
  std::vector<double> s1, gap;
  std::vector<Word> ws1, wgap;

  explicit Mins(int n)
      : s1(static_cast<size_t>(n) + 1, 0.0),
        gap(static_cast<size_t>(n) + 1, 0.0),
        ws1(static_cast<size_t>(n) + 1),
        wgap(static_cast<size_t>(n) + 1) {
    std::fill(s1.begin() + 1, s1.end(), std::numeric_limits<double>::infinity());
    std::fill(gap.begin() + 1, gap.end(), std::numeric_limits<double>::infinity());
  }

  void feed(int len, double v_s1, double v_gap, const Word& w) {
    auto upd = [&](std::vector<double>& vals, std::vector<Word>& wits, double v) {
      const size_t i = static_cast<size_t>(len);
      if (v < vals[i] || (v == vals[i] && word_lex_less(w, wits[i]))) {
        vals[i] = v;
        wits[i] = w;
      }
    };
    upd(s1, ws1, v_s1);
    upd(gap, wgap, v_gap);
  }

  void merge(const Mins& o) {
    for (size_t i = 1; i < s1.size(); ++i) {
      if (o.s1[i] < s1[i] || (o.s1[i] == s1[i] && word_lex_less(o.ws1[i], ws1[i]))) {
        s1[i] = o.s1[i];
        ws1[i] = o.ws1[i];
      }
      if (o.gap[i] < gap[i] ||
          (o.gap[i] == gap[i] && word_lex_less(o.wgap[i], wgap[i]))) {
        gap[i] = o.gap[i];
        wgap[i] = o.wgap[i];
      }
    }
  }
};

void sweep_subtree(const Representation& rep, int32_t first, int max_length,
                   Mins& mins) {
  const int rank = rep.rank();
  Word w{first};
  std::vector<RatMat3> stack;
  stack.push_back(first > 0 ? rep.image(first - 1) : inv3(rep.image(-first - 1)));

  const auto visit = [&](const RatMat3& m, int len) {
    const auto sv = singular_values(m);
    mins.feed(len, std::log(sv[0]), std::log(sv[0]) - std::log(sv[1]), w);
  };
  visit(stack.back(), 1);

  // Iterative depth-first walk of the reduced-word tree in letter order.
  std::vector<int32_t> next_letter{-rank};
  while (!w.empty()) {
    if (static_cast<int>(w.size()) < max_length && next_letter.size() == w.size()) {
      next_letter.push_back(-rank);
    }
    if (static_cast<int>(w.size()) == max_length ||
        next_letter.back() > rank) {
      next_letter.pop_back();
      w.pop_back();
      stack.pop_back();
      continue;
    }
    int32_t x = next_letter.back();
    // Advance to the next admissible letter at this node.
    while (x <= rank && (x == 0 || x == -w.back())) ++x;
    if (x > rank) {
      next_letter.pop_back();
      w.pop_back();
      stack.pop_back();
      continue;
    }
    next_letter.back() = x + 1;
    w.push_back(x);
    const RatMat3& step =
        x > 0 ? rep.image(x - 1) : inv3(rep.image(-x - 1));
    stack.push_back(mul3(stack.back(), step));
    visit(stack.back(), static_cast<int>(w.size()));
    if (static_cast<int>(w.size()) < max_length) next_letter.push_back(-rank);
  }
}

void fit_slope(const std::vector<double>& y, int n, double& slope,
               double& intercept) {
  // Ordinary least squares over lengths 2..n; shorter ranges fall back to 0.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = 2; i <= n; ++i) {
    const double v = y[static_cast<size_t>(i)];
    if (!std::isfinite(v)) continue;
    sx += i;
    sy += v;
    sxx += static_cast<double>(i) * i;
    sxy += i * v;
    ++cnt;
  }
  if (cnt < 2) {
    slope = 0;
    intercept = cnt == 1 ? sy : 0;
    return;
  }
  const double denom = cnt * sxx - sx * sx;
  slope = (cnt * sxy - sx * sy) / denom;
  intercept = (sy - slope * sx) / cnt;
}

GrowthProfile profile_impl(const Representation& rep, int max_length,
                           const ProfileOptions& opts) {
  if (max_length < 1) throw std::invalid_argument("profile: max length must be >= 1");
  const int rank = rep.rank();

  GrowthProfile out;
  out.max_length = max_length;
  Mins mins(max_length);
  mins.feed(0, 0.0, 0.0, Word{});

  unsigned long long total = 0;
  bool over_cap = false;
  for (int n = 1; n <= max_length && !over_cap; ++n) {
    try {
      total += reduced_word_count(rank, n);
    } catch (const std::overflow_error&) {
      over_cap = true;
    }
    over_cap = over_cap || total > kProfileWordCap;
  }

  if (over_cap && !opts.sample)
    throw std::invalid_argument(
        "profile: exhaustive enumeration exceeds the word cap; rerun with "
        "sampling enabled");

  if (!over_cap && !opts.sample) {
    out.exhaustive = true;
    std::vector<int32_t> firsts;
    for (int i = -rank; i <= rank; ++i)
      if (i != 0) firsts.push_back(static_cast<int32_t>(i));

    if (opts.workers <= 1) {
      for (int32_t f : firsts) sweep_subtree(rep, f, max_length, mins);
    } else {
      std::vector<Mins> parts(firsts.size(), Mins(max_length));
      std::vector<std::thread> pool;
      std::atomic<size_t> cursor{0};
      const int workers =
          std::min<int>(opts.workers, static_cast<int>(firsts.size()));
      for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
          for (size_t i = cursor.fetch_add(1); i < firsts.size();
               i = cursor.fetch_add(1))
            sweep_subtree(rep, firsts[i], max_length, parts[i]);
        });
      }
      for (auto& th : pool) th.join();
      for (const Mins& p : parts) mins.merge(p);  // fixed merge order
    }
  } else {
    out.exhaustive = false;
    std::mt19937_64 rng(opts.seed);
    for (int n = 1; n <= max_length; ++n) {
      for (int s = 0; s < opts.samples_per_length; ++s) {
        Word w;
        for (int i = 0; i < n; ++i) {
          int32_t x;
          do {
            const int r = static_cast<int>(rng() % static_cast<unsigned>(2 * rank));
            x = static_cast<int32_t>(r < rank ? r + 1 : -(r - rank + 1));
          } while (!w.empty() && x == -w.back());
          w.push_back(x);
        }
        const auto sv = singular_values(rep.evaluate(w));
        mins.feed(n, std::log(sv[0]), std::log(sv[0]) - std::log(sv[1]), w);
      }
    }
  }

  out.min_log_s1 = mins.s1;
  out.min_gap = mins.gap;
  out.witness_s1 = mins.ws1;
  out.witness_gap = mins.wgap;
  fit_slope(out.min_log_s1, max_length, out.slope_s1, out.intercept_s1);
  fit_slope(out.min_gap, max_length, out.slope_gap, out.intercept_gap);
  return out;
}

}  // namespace

GrowthProfile qi_profile(const Representation& rep, int max_length,
                         const ProfileOptions& opts) {
  return profile_impl(rep, max_length, opts);
}

GrowthProfile anosov_gap_profile(const Representation& rep, int max_length,
                                 const ProfileOptions& opts) {
  return profile_impl(rep, max_length, opts);
}

bool nonreal_spectrum_witness(const Representation& rep, const Word& w) {
  const Cubic p = charpoly3(rep.evaluate(w));
  return sgn(cubic_discriminant(p)) < 0;
}

std::vector<std::pair<Word, RatMat3>> unipotent_scan(const Representation& rep,
                                                     int max_length) {
  if (max_length < 1) throw std::invalid_argument("unipotent_scan: N >= 1");
  unsigned long long total = 0;
  for (int n = 1; n <= max_length; ++n) {
    total += reduced_word_count(rep.rank(), n);
    if (total > kProfileWordCap)
      throw std::invalid_argument("unipotent_scan: enumeration exceeds the word cap");
  }

  std::vector<std::pair<Word, RatMat3>> hits;
  // Depth-first over the reduced tree, exact products on a stack.
  struct Frame {
    Word w;
    RatMat3 m;
  };
  const int rank = rep.rank();
  std::function<void(Frame&, int)> walk = [&](Frame& f, int depth) {
    if (depth >= 1) {
      if (is_unipotent(f.m) && !f.m.is_identity()) hits.emplace_back(f.w, f.m);
    }
    if (depth == max_length) return;
    for (int32_t x = -rank; x <= rank; ++x) {
      if (x == 0) continue;
      if (!f.w.empty() && x == -f.w.back()) continue;
      Frame g;
      g.w = f.w;
      g.w.push_back(x);
      g.m = mul3(f.m, x > 0 ? rep.image(x - 1) : inv3(rep.image(-x - 1)));
      walk(g, depth + 1);
    }
  };
  Frame root{Word{}, RatMat3::identity()};
  walk(root, 0);
  return hits;
}

double unipotent_residual(const Mat3d& m) {
  Mat3d d = m;
  d.at(0, 0) -= 1;
  d.at(1, 1) -= 1;
  d.at(2, 2) -= 1;
  const Mat3d cube = mul(mul(d, d), d);
  const double scale = std::max(1.0, frobenius(m));
  return frobenius(cube) / (scale * scale * scale);
}

std::vector<std::pair<Word, Mat3d>> unipotent_scan_float(const FloatRep& rep,
                                                         int max_length,
                                                         double tol) {
  std::vector<std::pair<Word, Mat3d>> hits;
  const int rank = rep.gens.rank;
  std::function<void(const Word&, const Mat3d&, int)> walk =
      [&](const Word& w, const Mat3d& m, int depth) {
        if (depth >= 1) {
          Mat3d d = m;
          d.at(0, 0) -= 1;
          d.at(1, 1) -= 1;
          d.at(2, 2) -= 1;
          if (unipotent_residual(m) <= tol && frobenius(d) > 1e-9)
            hits.emplace_back(w, m);
        }
        if (depth == max_length) return;
        for (int32_t x = -rank; x <= rank; ++x) {
          if (x == 0) continue;
          if (!w.empty() && x == -w.back()) continue;
          Word w2 = w;
          w2.push_back(x);
          const Mat3d& img = rep.images[static_cast<size_t>((x > 0 ? x : -x) - 1)];
          walk(w2, mul(m, x > 0 ? img : inverse(img)), depth + 1);
        }
      };
  walk(Word{}, Mat3d::identity(), 0);
  return hits;
}

}  // namespace anosov
