#include "leafsight/glcm.hpp"

#include <cmath>

#include "leafsight/eigenvalues.hpp"
#include "leafsight/imaging.hpp"

namespace leafsight {

namespace {

inline Scalar xlogx(Scalar p) { return p > 0 ? p * std::log(p) : Scalar(0); }

}  // namespace

QuantizedImage quantize(const GrayImage& gray, const BinaryMask& mask, int levels) {
  if (levels < 2) throw ParamError("quantize: levels must be >= 2");
  if (mask.width() != gray.width() || mask.height() != gray.height())
    throw ParamError("quantize: mask dimensions do not match image");
  QuantizedImage out;
  out.levels = levels;
  out.q = MatU8::Zero(gray.height(), gray.width());
  for (Index y = 0; y < gray.height(); ++y)
    for (Index x = 0; x < gray.width(); ++x)
      if (mask.m(y, x))
        out.q(y, x) = static_cast<std::uint8_t>(
            static_cast<int>(gray.v(y, x)) * levels / 256);
  return out;
}

Glcm build_glcm(const QuantizedImage& q, const BinaryMask& mask,
                const std::vector<GlcmOffset>& offsets, bool symmetric) {
  if (offsets.empty()) throw ParamError("build_glcm: at least one offset required");
  for (const auto& o : offsets)
    if (o.dx == 0 && o.dy == 0)
      throw ParamError("build_glcm: offset (0,0) is not allowed");
  if (mask.empty()) throw ParamError("build_glcm: mask is empty");

  Glcm g;
  g.levels = q.levels;
  g.counts.setZero(q.levels, q.levels);
  const Index w = q.width();
  const Index h = q.height();
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (!mask.m(y, x)) continue;
      for (const auto& o : offsets) {
        const Index ny = y + o.dy;
        const Index nx = x + o.dx;
        if (ny < 0 || ny >= h || nx < 0 || nx >= w || !mask.m(ny, nx)) continue;
        ++g.counts(q.q(y, x), q.q(ny, nx));
        if (symmetric) ++g.counts(q.q(ny, nx), q.q(y, x));
      }
    }
  }
  const std::uint64_t total = g.total();
  if (total == 0)
    throw EmptyGlcmError("build_glcm: no co-occurring pair inside the mask");
  g.probs = g.counts.cast<Scalar>() / static_cast<Scalar>(total);
  return g;
}

MarginalStats marginal_stats(const Glcm& g) {
  const int n = g.levels;
  const MatX& p = g.probs;
  MarginalStats m;
  m.px = p.rowwise().sum();
  m.py = p.colwise().sum().transpose();
  m.p_sum = VecX::Zero(2 * n - 1);
  m.p_diff = VecX::Zero(n);
  for (int i = 0; i < n; ++i) {
    m.mu_x += i * m.px(i);
    m.mu_y += i * m.py(i);
    for (int j = 0; j < n; ++j) {
      m.p_sum(i + j) += p(i, j);
      m.p_diff(std::abs(i - j)) += p(i, j);
    }
  }
  Scalar vx = 0, vy = 0;
  for (int i = 0; i < n; ++i) {
    vx += (i - m.mu_x) * (i - m.mu_x) * m.px(i);
    vy += (i - m.mu_y) * (i - m.mu_y) * m.py(i);
  }
  m.sigma_x = std::sqrt(vx);
  m.sigma_y = std::sqrt(vy);
  for (int i = 0; i < n; ++i) {
    m.hx -= xlogx(m.px(i));
    m.hy -= xlogx(m.py(i));
    for (int j = 0; j < n; ++j) {
      m.hxy -= xlogx(p(i, j));
      const Scalar prod = m.px(i) * m.py(j);
      if (p(i, j) > 0 && prod > 0) m.hxy1 -= p(i, j) * std::log(prod);
      m.hxy2 -= xlogx(prod);
    }
  }
  return m;
}

TextureFeatures texture_features(const Glcm& g, const MarginalStats& m) {
  const int n = g.levels;
  const MatX& p = g.probs;
  const Scalar gsq = static_cast<Scalar>(n) * n;
  TextureFeatures f;

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Scalar pij = p(i, j);
      const Scalar d = static_cast<Scalar>(i - j);
      const Scalar ad = std::abs(d);
      const Scalar c = i + j - m.mu_x - m.mu_y;
      f.uniformity += pij * pij;
      f.contrast += d * d * pij;
      f.dissimilarity += ad * pij;
      f.homogeneity += pij / (1 + d * d);
      f.inverse_difference += pij / (1 + ad);
      f.autocorrelation += static_cast<Scalar>(i) * j * pij;
      f.cluster_shade += c * c * c * pij;
      f.cluster_prominence += c * c * c * c * pij;
      f.max_probability = std::max(f.max_probability, pij);
      f.sum_of_squares += (i - m.mu_x) * (i - m.mu_x) * pij;
      f.idn += pij / (1 + ad / n);
      f.idmn += pij / (1 + d * d / gsq);
    }
  }
  f.entropy = m.hxy;

  const Scalar sxsy = m.sigma_x * m.sigma_y;
  f.correlation = sxsy > 0 ? (f.autocorrelation - m.mu_x * m.mu_y) / sxsy : 0;

  for (int k = 0; k < 2 * n - 1; ++k) f.sum_average += k * m.p_sum(k);
  for (int k = 0; k < 2 * n - 1; ++k) {
    f.sum_variance += (k - f.sum_average) * (k - f.sum_average) * m.p_sum(k);
    f.sum_entropy -= xlogx(m.p_sum(k));
  }
  Scalar mu_diff = 0;
  for (int k = 0; k < n; ++k) mu_diff += k * m.p_diff(k);
  for (int k = 0; k < n; ++k) {
    f.difference_variance += (k - mu_diff) * (k - mu_diff) * m.p_diff(k);
    f.difference_entropy -= xlogx(m.p_diff(k));
  }

  const Scalar hmax = std::max(m.hx, m.hy);
  f.imc1 = hmax > 0 ? (m.hxy - m.hxy1) / hmax : 0;
  f.imc2 = std::sqrt(std::max(Scalar(0), 1 - std::exp(-2 * (m.hxy2 - m.hxy))));

  // MCC: second-largest eigenvalue of Q(i,j) = sum_k p(i,k) p(j,k) /
  // (px(i) py(k)), restricted to levels with nonzero marginals. Q is
  // similar to a symmetric PSD matrix, so its spectrum is real.
  std::vector<int> live_rows, live_cols;
  for (int i = 0; i < n; ++i) {
    if (m.px(i) > 0) live_rows.push_back(i);
    if (m.py(i) > 0) live_cols.push_back(i);
  }
  const int nr = static_cast<int>(live_rows.size());
  if (nr >= 2) {
    MatX qmat = MatX::Zero(nr, nr);
    for (int a = 0; a < nr; ++a) {
      for (int b = 0; b < nr; ++b) {
        Scalar s = 0;
        for (int k : live_cols)
          s += p(live_rows[a], k) * p(live_rows[b], k) /
               (m.px(live_rows[a]) * m.py(k));
        qmat(a, b) = s;
      }
    }
    const std::vector<Scalar> eig = real_eigenvalues_qr(qmat);
    f.mcc = std::sqrt(std::max(Scalar(0), eig[1]));
  }
  return f;
}

ColorMoments color_moments(const RgbImage& img, const BinaryMask& mask) {
  if (mask.width() != img.width() || mask.height() != img.height())
    throw ParamError("color_moments: mask dimensions do not match image");
  if (mask.empty()) throw ParamError("color_moments: mask is empty");

  Scalar sum[3] = {0, 0, 0};
  Scalar sq[3] = {0, 0, 0};
  Index count = 0;
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      if (!mask.m(y, x)) continue;
      const Scalar c[3] = {Scalar(img.r(y, x)), Scalar(img.g(y, x)),
                           Scalar(img.b(y, x))};
      for (int k = 0; k < 3; ++k) {
        sum[k] += c[k];
        sq[k] += c[k] * c[k];
      }
      ++count;
    }
  }
  ColorMoments cm;
  const Scalar inv = Scalar(1) / static_cast<Scalar>(count);
  cm.mean_r = sum[0] * inv;
  cm.mean_g = sum[1] * inv;
  cm.mean_b = sum[2] * inv;
  cm.std_r = std::sqrt(std::max(Scalar(0), sq[0] * inv - cm.mean_r * cm.mean_r));
  cm.std_g = std::sqrt(std::max(Scalar(0), sq[1] * inv - cm.mean_g * cm.mean_g));
  cm.std_b = std::sqrt(std::max(Scalar(0), sq[2] * inv - cm.mean_b * cm.mean_b));
  return cm;
}

const std::vector<std::string>& ColorMoments::names() {
  static const std::vector<std::string> kNames = {
      "mean_r", "mean_g", "mean_b", "std_r", "std_g", "std_b"};
  return kNames;
}

VecX ColorMoments::to_vector() const {
  VecX v(6);
  v << mean_r, mean_g, mean_b, std_r, std_g, std_b;
  return v;
}

const std::vector<std::string>& TextureFeatures::names() {
  static const std::vector<std::string> kNames = {
      "uniformity", "entropy", "contrast", "dissimilarity", "homogeneity",
      "inverse_difference", "correlation", "autocorrelation", "cluster_shade",
      "cluster_prominence", "max_probability", "sum_of_squares", "sum_average",
      "sum_variance", "sum_entropy", "difference_variance",
      "difference_entropy", "imc1", "imc2", "mcc", "idn", "idmn"};
  return kNames;
}

VecX TextureFeatures::to_vector() const {
  VecX v(22);
  v << uniformity, entropy, contrast, dissimilarity, homogeneity,
      inverse_difference, correlation, autocorrelation, cluster_shade,
      cluster_prominence, max_probability, sum_of_squares, sum_average,
      sum_variance, sum_entropy, difference_variance, difference_entropy,
      imc1, imc2, mcc, idn, idmn;
  return v;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names = ColorMoments::names();
    const auto& tex = TextureFeatures::names();
    names.insert(names.end(), tex.begin(), tex.end());
    return names;
  }();
  return kNames;
}

FeatureVector extract_feature_vector(const RgbImage& img, const BinaryMask& leaf,
                                     const BinaryMask& lesion,
                                     const FeatureConfig& cfg) {
  if (lesion.empty()) throw ParamError("extract_feature_vector: lesion mask is empty");
  if (!lesion.subset_of(leaf))
    throw ParamError("extract_feature_vector: lesion mask exceeds leaf mask");

  const ColorMoments cm = color_moments(img, lesion);
  const GrayImage gray = to_grayscale(img);
  const QuantizedImage q = quantize(gray, lesion, cfg.gray_levels);
  const Glcm g = build_glcm(q, lesion, cfg.offsets, cfg.symmetric);
  const TextureFeatures tf = texture_features(g, marginal_stats(g));

  FeatureVector fv;
  fv.values.resize(28);
  fv.values << cm.to_vector(), tf.to_vector();
  return fv;
}

}  // namespace leafsight
