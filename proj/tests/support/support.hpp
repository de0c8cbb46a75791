#pragma once

// Fixtures and helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mobgen/config.hpp"
#include "mobgen/dense_matrix.hpp"
#include "mobgen/evolution.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/overlay.hpp"
#include "mobgen/realize.hpp"

namespace mobgen::test {

inline constexpr double kPitch = 6.44;

/// Default kernel and clock on a smaller disc. n = 12 or 20.
inline RunConfig small_config(int n) {
  RunConfig c = paper_default_config();
  if (n == 12) {
    c.grid = GridConfig{33.749, -84.388, 1.72 * kPitch, 6, 0.0, 0.4 * kPitch};
    c.overlay = OverlaySpec{std::nullopt, 2, 1, 2, FeederMode::single};
  } else if (n == 20) {
    c.grid = GridConfig{33.749, -84.388, 2.27 * kPitch, 6, 0.3 * kPitch, 0.4 * kPitch};
    c.overlay = OverlaySpec{std::nullopt, 2, 2, 2, FeederMode::single};
  } else {
    throw std::invalid_argument("small_config: n must be 12 or 20");
  }
  return c;
}

/// Grid, overlay, kernel and one day of matrices for a config. Not movable:
/// the kernel keeps references to the grid and overlay.
struct Model {
  explicit Model(const RunConfig& c)
      : config(c),
        grid(build_grid(c.grid)),
        overlay(build_overlay(grid, c.overlay)),
        kernel(grid, overlay, c.kernel, c.clock),
        day(kernel.build_day()) {}
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  FixedPointResult solve() const { return fixed_point(compose_day(day)); }

  RunConfig config;
  BaseGraph grid;
  OverlayNetwork overlay;
  TransitionKernel kernel;
  std::vector<TransitionMatrix> day;
};

inline NodeIndex node_at(const BaseGraph& g, Axial a) {
  for (NodeIndex i = 0; i < g.size(); ++i)
    if (g.cell(i).axial == a) return i;
  throw std::out_of_range("no cell at the requested axial coordinate");
}

/// Random probability vector; `sparsity` is the chance each entry is zeroed
/// (at least one entry stays positive).
inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n,
                                               double sparsity = 0.0) {
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) {
    v = u(rng) < sparsity ? 0.0 : ex(rng);
    total += v;
  }
  if (total == 0.0) {
    p[rng() % n] = 1.0;
    total = 1.0;
  }
  for (auto& v : p) v /= total;
  return p;
}

inline DenseMatrix random_stochastic(std::mt19937_64& rng, std::size_t n, double sparsity = 0.0) {
  DenseMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = random_distribution(rng, n, sparsity);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

struct ChiSquared {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson homogeneity test of a contingency table (rows = groups, columns =
/// categories). Categories and groups with zero totals are dropped.
inline ChiSquared homogeneity_test(const std::vector<std::vector<std::uint64_t>>& table) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : table) {
    double s = 0.0;
    for (auto v : r) s += static_cast<double>(v);
    if (s > 0.0) {
      rows.emplace_back();
      for (auto v : r) rows.back().push_back(static_cast<double>(v));
    }
  }
  ChiSquared out;
  if (rows.size() < 2) return out;
  const std::size_t k = rows.front().size();
  std::vector<double> col(k, 0.0), row(rows.size(), 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < k; ++b) {
      row[a] += rows[a][b];
      col[b] += rows[a][b];
      total += rows[a][b];
    }
  int used_cols = 0;
  for (std::size_t b = 0; b < k; ++b) {
    if (col[b] == 0.0) continue;
    ++used_cols;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const double e = row[a] * col[b] / total;
      out.statistic += (rows[a][b] - e) * (rows[a][b] - e) / e;
    }
  }
  out.dof = (used_cols - 1) * static_cast<int>(rows.size() - 1);
  if (out.dof <= 0) return out;
  boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mobgen_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mobgen::test
