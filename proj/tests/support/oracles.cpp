#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace leafsight::testing {

int otsu_threshold_oracle(const Histogram256& hist) {
  const std::uint64_t total = hist.total();

  // Exact comparison of sigma_B^2 = (s0 w1 - s1 w0)^2 / (W^2 w0 w1)
  // across thresholds: cross-multiply the integer numerators and
  // denominators in 128-bit arithmetic.
  __int128 best_num = -1, best_den = 1;
  std::vector<int> ties;
  for (int t = 0; t < 256; ++t) {
    std::uint64_t w0 = 0, s0 = 0, w1 = 0, s1 = 0;
    for (int i = 0; i < 256; ++i) {
      if (i <= t) {
        w0 += hist.counts[i];
        s0 += static_cast<std::uint64_t>(i) * hist.counts[i];
      } else {
        w1 += hist.counts[i];
        s1 += static_cast<std::uint64_t>(i) * hist.counts[i];
      }
    }
    (void)total;
    if (w0 == 0 || w1 == 0) continue;
    const __int128 diff = static_cast<__int128>(s0) * w1 - static_cast<__int128>(s1) * w0;
    const __int128 num = diff * diff;
    const __int128 den = static_cast<__int128>(w0) * w1;
    if (ties.empty() || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      ties.assign(1, t);
    } else if (num * best_den == best_num * den) {
      ties.push_back(t);
    }
  }
  long long sum = 0;
  for (int t : ties) sum += t;
  return static_cast<int>(sum / static_cast<long long>(ties.size()));
}

Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> glcm_counts_oracle(
    const QuantizedImage& q, const BinaryMask& mask,
    const std::vector<GlcmOffset>& offsets, bool symmetric) {
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  counts.setZero(q.levels, q.levels);
  for (const auto& off : offsets) {
    for (Index y = 0; y < q.height(); ++y) {
      for (Index x = 0; x < q.width(); ++x) {
        for (Index y2 = 0; y2 < q.height(); ++y2) {
          for (Index x2 = 0; x2 < q.width(); ++x2) {
            if (x2 - x != off.dx || y2 - y != off.dy) continue;
            if (!mask.m(y, x) || !mask.m(y2, x2)) continue;
            ++counts(q.q(y, x), q.q(y2, x2));
            if (symmetric) ++counts(q.q(y2, x2), q.q(y, x));
          }
        }
      }
    }
  }
  return counts;
}

namespace {

Scalar nlog(Scalar v) { return v > 0 ? std::log(v) : 0; }

}  // namespace

MarginalOracle marginal_oracle(const MatX& p) {
  const int n = static_cast<int>(p.rows());
  MarginalOracle m;
  m.px.assign(n, 0);
  m.py.assign(n, 0);
  m.p_sum.assign(2 * n - 1, 0);
  m.p_diff.assign(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.px[i] += p(i, j);
      m.py[j] += p(i, j);
      m.p_sum[i + j] += p(i, j);
      m.p_diff[std::abs(i - j)] += p(i, j);
    }
  m.mu_x = m.mu_y = 0;
  for (int i = 0; i < n; ++i) {
    m.mu_x += i * m.px[i];
    m.mu_y += i * m.py[i];
  }
  Scalar vx = 0, vy = 0;
  for (int i = 0; i < n; ++i) {
    vx += (i - m.mu_x) * (i - m.mu_x) * m.px[i];
    vy += (i - m.mu_y) * (i - m.mu_y) * m.py[i];
  }
  m.sigma_x = std::sqrt(vx);
  m.sigma_y = std::sqrt(vy);
  m.hx = m.hy = m.hxy = m.hxy1 = m.hxy2 = 0;
  for (int i = 0; i < n; ++i) {
    m.hx -= m.px[i] * nlog(m.px[i]);
    m.hy -= m.py[i] * nlog(m.py[i]);
    for (int j = 0; j < n; ++j) {
      m.hxy -= p(i, j) * nlog(p(i, j));
      if (p(i, j) > 0) m.hxy1 -= p(i, j) * nlog(m.px[i] * m.py[j]);
      m.hxy2 -= m.px[i] * m.py[j] * nlog(m.px[i] * m.py[j]);
    }
  }
  return m;
}

std::vector<Scalar> texture_features_oracle(const MatX& p) {
  const int n = static_cast<int>(p.rows());
  const MarginalOracle m = marginal_oracle(p);
  const Scalar g = n;

  Scalar uniformity = 0, entropy = 0, contrast = 0, dissim = 0, homog = 0;
  Scalar id = 0, autoc = 0, cs = 0, cp = 0, mp = 0, ss = 0, idn = 0, idmn = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Scalar v = p(i, j);
      uniformity += v * v;
      entropy -= v * nlog(v);
      contrast += (i - j) * (i - j) * v;
      dissim += std::abs(i - j) * v;
      homog += v / (1 + (i - j) * (i - j));
      id += v / (1 + std::abs(i - j));
      autoc += Scalar(i) * j * v;
      cs += std::pow(i + j - m.mu_x - m.mu_y, 3) * v;
      cp += std::pow(i + j - m.mu_x - m.mu_y, 4) * v;
      mp = std::max(mp, v);
      ss += (i - m.mu_x) * (i - m.mu_x) * v;
      idn += v / (1 + std::abs(i - j) / g);
      idmn += v / (1 + (i - j) * (i - j) / (g * g));
    }
  }
  const Scalar corr =
      m.sigma_x * m.sigma_y > 0 ? (autoc - m.mu_x * m.mu_y) / (m.sigma_x * m.sigma_y) : 0;

  Scalar sa = 0, sv = 0, se = 0;
  for (int k = 0; k < 2 * n - 1; ++k) sa += k * m.p_sum[k];
  for (int k = 0; k < 2 * n - 1; ++k) {
    sv += (k - sa) * (k - sa) * m.p_sum[k];
    se -= m.p_sum[k] * nlog(m.p_sum[k]);
  }
  Scalar dmean = 0, dv = 0, de = 0;
  for (int k = 0; k < n; ++k) dmean += k * m.p_diff[k];
  for (int k = 0; k < n; ++k) {
    dv += (k - dmean) * (k - dmean) * m.p_diff[k];
    de -= m.p_diff[k] * nlog(m.p_diff[k]);
  }

  const Scalar hmax = std::max(m.hx, m.hy);
  const Scalar imc1 = hmax > 0 ? (m.hxy - m.hxy1) / hmax : 0;
  const Scalar imc2 =
      std::sqrt(std::max(Scalar(0), 1 - std::exp(-2 * (m.hxy2 - m.hxy))));

  // MCC via Eigen's general eigensolver on the marginal-reduced Q.
  Scalar mcc = 0;
  {
    std::vector<int> rows, cols;
    for (int i = 0; i < n; ++i) {
      if (m.px[i] > 0) rows.push_back(i);
      if (m.py[i] > 0) cols.push_back(i);
    }
    if (rows.size() >= 2) {
      Eigen::MatrixXd q(rows.size(), rows.size());
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) {
          Scalar acc = 0;
          for (int k : cols)
            acc += p(rows[a], k) * p(rows[b], k) / (m.px[rows[a]] * m.py[k]);
          q(a, b) = acc;
        }
      Eigen::EigenSolver<Eigen::MatrixXd> solver(q, false);
      std::vector<Scalar> eig;
      for (Index i = 0; i < solver.eigenvalues().size(); ++i)
        eig.push_back(solver.eigenvalues()(i).real());
      std::sort(eig.begin(), eig.end(), std::greater<Scalar>());
      mcc = std::sqrt(std::max(Scalar(0), eig[1]));
    }
  }

  return {uniformity, entropy, contrast, dissim, homog, id, corr, autoc,
          cs, cp, mp, ss, sa, sv, se, dv, de, imc1, imc2, mcc, idn, idmn};
}

std::vector<Scalar> color_moments_oracle(const RgbImage& img, const BinaryMask& mask) {
  std::vector<Scalar> vals[3];
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x)
      if (mask.m(y, x)) {
        vals[0].push_back(img.r(y, x));
        vals[1].push_back(img.g(y, x));
        vals[2].push_back(img.b(y, x));
      }
  std::vector<Scalar> out;
  for (int k = 0; k < 3; ++k) {
    Scalar mean = 0;
    for (Scalar v : vals[k]) mean += v;
    mean /= static_cast<Scalar>(vals[k].size());
    out.push_back(mean);
  }
  for (int k = 0; k < 3; ++k) {
    Scalar var = 0;
    for (Scalar v : vals[k]) var += (v - out[k]) * (v - out[k]);
    var /= static_cast<Scalar>(vals[k].size());
    out.push_back(std::sqrt(var));
  }
  return out;
}

std::int64_t box_sum_oracle(const GrayImage& img, Index x0, Index y0, Index x1,
                            Index y1) {
  std::int64_t sum = 0;
  for (Index y = std::max<Index>(0, y0); y < std::min(img.height(), y1); ++y)
    for (Index x = std::max<Index>(0, x0); x < std::min(img.width(), x1); ++x)
      sum += img.v(y, x);
  return sum;
}

std::vector<Keypoint> detect_keypoints_oracle(const GrayImage& img,
                                              const DetectorParams& params) {
  const Index w = img.width();
  const Index h = img.height();
  std::vector<int> sizes;
  for (int f : params.filter_sizes)
    if (3 * f <= std::min(w, h)) sizes.push_back(f);
  if (sizes.size() < 3) return {};

  auto box = [&](Index x0, Index y0, Index x1, Index y1) {
    return static_cast<Scalar>(box_sum_oracle(img, x0, y0, x1, y1));
  };

  std::vector<ArrXX> maps;
  for (int f : sizes) {
    const int lobe = f / 3;
    const int border = (f - 1) / 2;
    const Scalar inv = Scalar(1) / (Scalar(f) * f * 255);
    ArrXX resp = ArrXX::Zero(h, w);
    for (Index r = border; r < h - border; ++r) {
      for (Index c = border; c < w - border; ++c) {
        const Scalar dxx =
            (box(c - border, r - lobe + 1, c + border + 1, r + lobe) -
             3 * box(c - lobe / 2, r - lobe + 1, c - lobe / 2 + lobe, r + lobe)) * inv;
        const Scalar dyy =
            (box(c - lobe + 1, r - border, c + lobe, r + border + 1) -
             3 * box(c - lobe + 1, r - lobe / 2, c + lobe, r - lobe / 2 + lobe)) * inv;
        const Scalar dxy =
            (box(c + 1, r - lobe, c + 1 + lobe, r) +
             box(c - lobe, r + 1, c, r + 1 + lobe) -
             box(c - lobe, r - lobe, c, r) -
             box(c + 1, r + 1, c + 1 + lobe, r + 1 + lobe)) * inv;
        resp(r, c) = dxx * dyy - Scalar(0.81) * dxy * dxy;
      }
    }
    maps.push_back(std::move(resp));
  }

  std::vector<Keypoint> found;
  for (std::size_t s = 1; s + 1 < sizes.size(); ++s) {
    for (Index y = 1; y < h - 1; ++y) {
      for (Index x = 1; x < w - 1; ++x) {
        const Scalar v = maps[s](y, x);
        if (v <= params.threshold) continue;
        bool max = true;
        for (int ds = -1; ds <= 1 && max; ++ds)
          for (int dy = -1; dy <= 1 && max; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (ds == 0 && dy == 0 && dx == 0) continue;
              if (maps[s + ds](y + dy, x + dx) >= v) {
                max = false;
                break;
              }
            }
        if (max)
          found.push_back({static_cast<Scalar>(x), static_cast<Scalar>(y),
                           Scalar(1.2) * sizes[s] / 9, v});
      }
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const Keypoint& a, const Keypoint& b) {
                     return a.response > b.response;
                   });
  return found;
}

void hsv_to_rgb(Scalar h, Scalar s, Scalar v, Scalar& r, Scalar& g, Scalar& b) {
  if (s <= 0) {
    r = g = b = v;
    return;
  }
  const Scalar h6 = h * 6;
  const int sector = static_cast<int>(h6) % 6;
  const Scalar f = h6 - std::floor(h6);
  const Scalar p = v * (1 - s);
  const Scalar q = v * (1 - s * f);
  const Scalar t = v * (1 - s * (1 - f));
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
}

}  // namespace leafsight::testing
