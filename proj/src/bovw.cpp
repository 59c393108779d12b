#include "leafsight/bovw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "leafsight/imaging.hpp"

namespace leafsight {

std::int64_t IntegralImage::box(Index x0, Index y0, Index x1, Index y1) const {
  x0 = std::clamp<Index>(x0, 0, width());
  x1 = std::clamp<Index>(x1, 0, width());
  y0 = std::clamp<Index>(y0, 0, height());
  y1 = std::clamp<Index>(y1, 0, height());
  if (x0 >= x1 || y0 >= y1) return 0;
  return s(y1, x1) - s(y0, x1) - s(y1, x0) + s(y0, x0);
}

IntegralImage integral_image(const GrayImage& gray) {
  const Index w = gray.width();
  const Index h = gray.height();
  IntegralImage ii;
  ii.s.setZero(h + 1, w + 1);
  for (Index y = 0; y < h; ++y) {
    std::int64_t row = 0;
    for (Index x = 0; x < w; ++x) {
      row += gray.v(y, x);
      ii.s(y + 1, x + 1) = ii.s(y, x + 1) + row;
    }
  }
  return ii;
}

namespace {

// Determinant-of-Hessian response map for one box-filter size, on
// intensities scaled to [0, 1]. Pixels where the filter does not fit keep
// response 0.
ArrXX doh_response(const IntegralImage& ii, int filter) {
  const Index w = ii.width();
  const Index h = ii.height();
  const int lobe = filter / 3;
  const int border = (filter - 1) / 2;
  const Scalar inv_area = Scalar(1) / (Scalar(filter) * filter * 255);

  ArrXX resp = ArrXX::Zero(h, w);
  for (Index r = border; r < h - border; ++r) {
    for (Index c = border; c < w - border; ++c) {
      // box(x0, y0, x1, y1) with half-open bounds
      const Scalar dxx =
          (ii.box(c - border, r - lobe + 1, c + border + 1, r + lobe) -
           3 * ii.box(c - lobe / 2, r - lobe + 1, c - lobe / 2 + lobe, r + lobe)) *
          inv_area;
      const Scalar dyy =
          (ii.box(c - lobe + 1, r - border, c + lobe, r + border + 1) -
           3 * ii.box(c - lobe + 1, r - lobe / 2, c + lobe, r - lobe / 2 + lobe)) *
          inv_area;
      const Scalar dxy =
          (ii.box(c + 1, r - lobe, c + 1 + lobe, r) +
           ii.box(c - lobe, r + 1, c, r + 1 + lobe) -
           ii.box(c - lobe, r - lobe, c, r) -
           ii.box(c + 1, r + 1, c + 1 + lobe, r + 1 + lobe)) *
          inv_area;
      resp(r, c) = dxx * dyy - Scalar(0.81) * dxy * dxy;
    }
  }
  return resp;
}

}  // namespace

std::vector<Keypoint> detect_keypoints(const IntegralImage& ii,
                                       const DetectorParams& params) {
  const Index w = ii.width();
  const Index h = ii.height();
  std::vector<int> sizes;
  for (int f : params.filter_sizes)
    if (3 * f <= std::min(w, h)) sizes.push_back(f);
  if (sizes.size() < 3) return {};

  std::vector<ArrXX> maps;
  maps.reserve(sizes.size());
  for (int f : sizes) maps.push_back(doh_response(ii, f));

  std::vector<Keypoint> found;
  for (std::size_t s = 1; s + 1 < sizes.size(); ++s) {
    const ArrXX& cur = maps[s];
    for (Index y = 1; y < h - 1; ++y) {
      for (Index x = 1; x < w - 1; ++x) {
        const Scalar v = cur(y, x);
        if (v <= params.threshold) continue;
        bool maximal = true;
        for (int ds = -1; ds <= 1 && maximal; ++ds) {
          const ArrXX& m = maps[s + ds];
          for (int dy = -1; dy <= 1 && maximal; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (ds == 0 && dy == 0 && dx == 0) continue;
              if (m(y + dy, x + dx) >= v) {
                maximal = false;
                break;
              }
            }
          }
        }
        if (maximal)
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

namespace {

// Haar responses over a 2s x 2s window on unit-scaled intensities:
// x-wavelet = right half - left half, y-wavelet = lower half - upper half.
Scalar haar_x(const IntegralImage& ii, Index x, Index y, int s) {
  return (ii.box(x, y - s, x + s, y + s) - ii.box(x - s, y - s, x, y + s)) /
         Scalar(255);
}

Scalar haar_y(const IntegralImage& ii, Index x, Index y, int s) {
  return (ii.box(x - s, y, x + s, y + s) - ii.box(x - s, y - s, x + s, y)) /
         Scalar(255);
}

}  // namespace

VecX describe(const IntegralImage& ii, const Keypoint& kp) {
  const Scalar s = std::max(Scalar(1), kp.scale);
  const int wave = std::max(1, static_cast<int>(std::lround(s)));
  const Scalar g_sigma = Scalar(3.3) * s;

  VecX desc = VecX::Zero(64);
  // 20x20 sample lattice at spacing s: cell (cx, cy) covers samples
  // (5 cx .. 5 cx + 4) x (5 cy .. 5 cy + 4), offsets centered on the key.
  for (int cy = 0; cy < 4; ++cy) {
    for (int cx = 0; cx < 4; ++cx) {
      Scalar sum_dx = 0, sum_adx = 0, sum_dy = 0, sum_ady = 0;
      for (int sy = 0; sy < 5; ++sy) {
        for (int sx = 0; sx < 5; ++sx) {
          const Scalar ox = (5 * cx + sx - Scalar(9.5)) * s;
          const Scalar oy = (5 * cy + sy - Scalar(9.5)) * s;
          Index px = static_cast<Index>(std::lround(kp.x + ox));
          Index py = static_cast<Index>(std::lround(kp.y + oy));
          px = std::clamp<Index>(px, 0, ii.width() - 1);
          py = std::clamp<Index>(py, 0, ii.height() - 1);
          const Scalar weight =
              std::exp(-(ox * ox + oy * oy) / (2 * g_sigma * g_sigma));
          const Scalar dx = weight * haar_x(ii, px, py, wave);
          const Scalar dy = weight * haar_y(ii, px, py, wave);
          sum_dx += dx;
          sum_adx += std::abs(dx);
          sum_dy += dy;
          sum_ady += std::abs(dy);
        }
      }
      const int base = 16 * cy + 4 * cx;
      desc(base + 0) = sum_dx;
      desc(base + 1) = sum_adx;
      desc(base + 2) = sum_dy;
      desc(base + 3) = sum_ady;
    }
  }
  const Scalar norm = desc.norm();
  if (norm > 0) desc /= norm;
  return desc;
}

namespace {

std::vector<Index> lexicographic_order(const MatX& rows) {
  std::vector<Index> order(rows.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index j = 0; j < rows.cols(); ++j) {
      if (rows(a, j) != rows(b, j)) return rows(a, j) < rows(b, j);
    }
    return false;
  });
  return order;
}

Index nearest_centroid(const MatX& centroids, const Eigen::Ref<const VecX>& p) {
  Index best = 0;
  Scalar best_d = (centroids.row(0).transpose() - p).squaredNorm();
  for (Index c = 1; c < centroids.rows(); ++c) {
    const Scalar d = (centroids.row(c).transpose() - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

Vocabulary kmeans_vocabulary(const MatX& descriptors, int k,
                             std::uint64_t rng_seed, int max_iters) {
  const Index n = descriptors.rows();
  if (k < 1) throw ParamError("kmeans_vocabulary: k must be >= 1");
  if (n < k)
    throw ParamError("kmeans_vocabulary: " + std::to_string(n) +
                     " descriptors for k = " + std::to_string(k));

  // Canonical order makes the outcome independent of input permutation.
  const std::vector<Index> order = lexicographic_order(descriptors);
  MatX pts(n, descriptors.cols());
  for (Index i = 0; i < n; ++i) pts.row(i) = descriptors.row(order[i]);

  std::mt19937_64 rng(rng_seed);
  MatX centroids(k, pts.cols());

  // k-means++ seeding
  {
    std::uniform_int_distribution<Index> first(0, n - 1);
    centroids.row(0) = pts.row(first(rng));
    VecX d2(n);
    for (Index i = 0; i < n; ++i)
      d2(i) = (pts.row(i) - centroids.row(0)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      const Scalar total = d2.sum();
      Index pick = 0;
      if (total > 0) {
        std::uniform_real_distribution<Scalar> u(0, total);
        Scalar target = u(rng);
        for (Index i = 0; i < n; ++i) {
          target -= d2(i);
          if (target <= 0) {
            pick = i;
            break;
          }
        }
      } else {
        std::uniform_int_distribution<Index> any(0, n - 1);
        pick = any(rng);
      }
      centroids.row(c) = pts.row(pick);
      for (Index i = 0; i < n; ++i)
        d2(i) = std::min(d2(i), (pts.row(i) - centroids.row(c)).squaredNorm());
    }
  }

  Vocabulary vocab;
  std::vector<Index> assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    Scalar distortion = 0;
    for (Index i = 0; i < n; ++i) {
      const Index c = nearest_centroid(centroids, pts.row(i).transpose());
      distortion += (pts.row(i).transpose() - centroids.row(c).transpose()).squaredNorm();
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    vocab.distortion_history.push_back(distortion);
    if (!changed) break;

    MatX sums = MatX::Zero(k, pts.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += pts.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<Scalar>(counts[c]);
      } else {
        // Re-seed an empty cluster with the point farthest from its centroid.
        Index far = 0;
        Scalar far_d = -1;
        for (Index i = 0; i < n; ++i) {
          const Scalar d =
              (pts.row(i).transpose() - centroids.row(assign[i]).transpose()).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids.row(c) = pts.row(far);
      }
    }
  }
  vocab.centroids = centroids;
  return vocab;
}

BowHistogram encode(const MatX& descriptors, const Vocabulary& vocab) {
  BowHistogram hist;
  hist.h = VecX::Zero(vocab.k());
  if (descriptors.rows() == 0) return hist;
  for (Index i = 0; i < descriptors.rows(); ++i)
    hist.h(nearest_centroid(vocab.centroids, descriptors.row(i).transpose())) += 1;
  hist.h /= hist.h.sum();
  hist.empty = false;
  return hist;
}

MatX image_descriptors(const GrayImage& img, const DetectorParams& params,
                       std::vector<Keypoint>* keypoints) {
  const IntegralImage ii = integral_image(img);
  const std::vector<Keypoint> kps = detect_keypoints(ii, params);
  MatX desc(static_cast<Index>(kps.size()), 64);
  for (std::size_t i = 0; i < kps.size(); ++i)
    desc.row(static_cast<Index>(i)) = describe(ii, kps[i]).transpose();
  if (keypoints) *keypoints = kps;
  return desc;
}

GateModel train_health_gate(const std::vector<GrayImage>& images,
                            const std::vector<bool>& healthy,
                            const GateConfig& cfg) {
  if (images.size() != healthy.size())
    throw ParamError("train_health_gate: image/label count mismatch");
  bool has_h = false, has_d = false;
  for (bool v : healthy) (v ? has_h : has_d) = true;
  if (!has_h || !has_d)
    throw ParamError("train_health_gate: both classes must be present");

  // Detect once per image; everything downstream reuses these.
  std::vector<MatX> descs(images.size());
  std::vector<std::vector<Keypoint>> kps(images.size());
  for (std::size_t i = 0; i < images.size(); ++i)
    descs[i] = image_descriptors(images[i], cfg.detector, &kps[i]);

  // Seeded per-class 50% subsample for vocabulary construction.
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> vocab_imgs;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < images.size(); ++i)
      if (healthy[i] == (cls == 0)) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t take = static_cast<std::size_t>(
        std::ceil(cfg.sample_fraction * static_cast<Scalar>(members.size())));
    members.resize(std::max<std::size_t>(1, take));
    vocab_imgs.insert(vocab_imgs.end(), members.begin(), members.end());
  }

  // Strongest 70% of keypoints per class by detector response.
  std::vector<VecX> pool_rows;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::pair<Scalar, std::pair<std::size_t, Index>>> strength;
    for (std::size_t i : vocab_imgs) {
      if (healthy[i] != (cls == 0)) continue;
      for (Index r = 0; r < descs[i].rows(); ++r)
        strength.push_back({kps[i][r].response, {i, r}});
    }
    std::stable_sort(strength.begin(), strength.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(cfg.strongest_fraction * static_cast<Scalar>(strength.size())));
    for (std::size_t t = 0; t < keep; ++t) {
      const auto [img, row] = strength[t].second;
      pool_rows.push_back(descs[img].row(row).transpose());
    }
  }
  if (static_cast<int>(pool_rows.size()) < cfg.vocabulary_size)
    throw ParamError("train_health_gate: only " +
                     std::to_string(pool_rows.size()) +
                     " descriptors for vocabulary size " +
                     std::to_string(cfg.vocabulary_size));
  MatX pool(static_cast<Index>(pool_rows.size()), 64);
  for (std::size_t i = 0; i < pool_rows.size(); ++i)
    pool.row(static_cast<Index>(i)) = pool_rows[i].transpose();

  GateModel model;
  model.detector = cfg.detector;
  model.config = cfg;
  model.vocabulary = kmeans_vocabulary(pool, cfg.vocabulary_size, cfg.rng_seed);

  // Every training image is encoded, zero-descriptor histograms included.
  MatX x(static_cast<Index>(images.size()), model.vocabulary.k());
  VecX y(static_cast<Index>(images.size()));
  for (std::size_t i = 0; i < images.size(); ++i) {
    x.row(static_cast<Index>(i)) = encode(descs[i], model.vocabulary).h.transpose();
    y(static_cast<Index>(i)) = healthy[i] ? 1 : -1;
  }
  SmoParams smo;
  smo.c = cfg.svm_c;
  smo.tol = cfg.svm_tol;
  smo.rng_seed = cfg.rng_seed;
  model.svm = smo_train(x, y, KernelSpec::linear(), smo);
  return model;
}

GateDecision classify_health(const GateModel& model, const GrayImage& img) {
  const MatX descs = image_descriptors(img, model.detector, nullptr);
  GateDecision decision;
  if (descs.rows() == 0) {
    // No texture evidence: route to stage 2 rather than skipping it.
    decision.healthy = false;
    decision.low_confidence = true;
    decision.score = 0;
    return decision;
  }
  const BowHistogram hist = encode(descs, model.vocabulary);
  decision.score = svm_decision(model.svm, hist.h);
  decision.healthy = decision.score >= 0;
  return decision;
}

GateDecision classify_health(const GateModel& model, const RgbImage& img) {
  return classify_health(model, to_grayscale(img));
}

}  // namespace leafsight
