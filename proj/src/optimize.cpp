#include "nrange/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nrange/rng.hpp"

namespace nrange {

namespace {

struct Track {
  Vec x;
  double value;
};

}  // namespace

SearchResult sphere_maximize(const Objective& objective, const Norm& space, const SearchConfig& cfg) {
  if (cfg.starts < 1 || cfg.budget < cfg.starts)
    throw std::invalid_argument("search config requires budget >= starts >= 1");
  if (!(cfg.step.decay > 0.0 && cfg.step.decay < 1.0))
    throw std::invalid_argument("step decay must lie in (0,1)");

  const int n = space.dim();
  const CounterRng root(cfg.seed);
  int evals = 0;

  auto eval = [&](const Vec& x) {
    ++evals;
    try {
      return objective(x);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("objective failed during sphere search: ") + e.what());
    }
  };
  auto try_project = [&](const Vec& v, Vec& out) {
    const double r = eval_norm(space, v);
    if (!(r > 0.0) || !std::isfinite(r)) return false;
    out = v / r;
    return true;
  };

  std::vector<Vec> starts;
  for (const auto& s : cfg.extra_starts) {
    Vec u;
    if (s.size() == n && try_project(s, u)) starts.push_back(std::move(u));
  }
  if (cfg.include_basis_starts) {
    for (int i = 0; i < n; ++i)
      for (double sign : {1.0, -1.0}) {
        Vec e = Vec::Zero(n);
        e[i] = sign;
        Vec u;
        if (try_project(e, u)) starts.push_back(std::move(u));
      }
    for (double sign : {1.0, -1.0}) {
      Vec u;
      if (try_project(Vec::Constant(n, sign), u)) starts.push_back(std::move(u));
    }
  }
  for (int k = 0; k < cfg.starts; ++k) {
    CounterRng rng = root.derive(static_cast<std::uint64_t>(k));
    Vec u;
    for (int attempt = 0; attempt < 16; ++attempt)
      if (try_project(rng.normal_vector(n), u)) break;
    if (u.size() == n) starts.push_back(std::move(u));
  }
  if (starts.empty()) throw std::invalid_argument("sphere search: no valid start point");

  std::vector<Track> tracks;
  tracks.reserve(starts.size());
  for (auto& s : starts) {
    const double v = eval(s);
    tracks.push_back({std::move(s), v});
  }

  std::vector<int> order(tracks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = tracks[a].value, vb = tracks[b].value;
    if (std::isnan(vb)) return !std::isnan(va);
    return va > vb;
  });
  const int refine = std::min<int>(std::max(1, cfg.refine_starts), static_cast<int>(tracks.size()));
  const int remaining = std::max(0, cfg.budget - evals);
  const int share = remaining / refine;

  const int n_random = std::max(2, n / 2);
  for (int r = 0; r < refine && share > 0; ++r) {
    const int idx = order[r];
    Track& t = tracks[idx];
    CounterRng rng = root.derive(0x100000ULL + static_cast<std::uint64_t>(idx));
    int used = 0;
    double h = cfg.step.initial;
    Vec cand;
    while (used < share && h >= cfg.step.floor) {
      bool improved = false;
      for (int d = 0; d < 2 * n + n_random && used < share; ++d) {
        Vec dir;
        if (d < 2 * n) {
          dir = Vec::Zero(n);
          dir[d / 2] = (d % 2 == 0) ? 1.0 : -1.0;
        } else {
          dir = rng.normal_vector(n);
          dir /= dir.norm();
        }
        if (!try_project(t.x + h * dir, cand)) continue;
        ++used;
        const double v = eval(cand);
        if (v > t.value) {
          t.x = cand;
          t.value = v;
          improved = true;
          // Keep going along a direction that pays off, doubling the step.
          double hx = 2.0 * h;
          while (used < share && hx <= 4.0 * cfg.step.initial) {
            if (!try_project(t.x + hx * dir, cand)) break;
            ++used;
            const double vx = eval(cand);
            if (!(vx > t.value)) break;
            t.x = cand;
            t.value = vx;
            h = std::min(cfg.step.initial, hx);
            hx *= 2.0;
          }
        }
      }
      if (!improved) h *= cfg.step.decay;
    }
  }

  SearchResult res;
  res.best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tracks.size(); ++i)
    if (!std::isnan(tracks[i].value) && (res.start_index_of_best < 0 || tracks[i].value > res.best_value)) {
      res.best_value = tracks[i].value;
      res.best_point = tracks[i].x;
      res.start_index_of_best = static_cast<int>(i);
    }
  if (res.start_index_of_best < 0) {
    res.best_point = tracks.front().x;
    res.best_value = tracks.front().value;
    res.start_index_of_best = 0;
  }
  res.evaluations_used = evals;
  return res;
}

std::pair<double, double> hull_interval(std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("hull of an empty point list");
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
  return {*lo, *hi};
}

}  // namespace nrange
