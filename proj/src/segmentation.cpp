#include "leafsight/segmentation.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <vector>

#include "leafsight/imaging.hpp"

namespace leafsight {

namespace {

constexpr int kDx8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy8[8] = {0, 1, 1, 1, 0, -1, -1, -1};

}  // namespace

Histogram256 histogram(const GrayImage& img) {
  Histogram256 h;
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x) ++h.counts[img.v(y, x)];
  return h;
}

Histogram256 histogram(const GrayImage& img, const BinaryMask& mask) {
  if (mask.width() != img.width() || mask.height() != img.height())
    throw ParamError("histogram: mask dimensions do not match image");
  Histogram256 h;
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x)
      if (mask.m(y, x)) ++h.counts[img.v(y, x)];
  return h;
}

LabelMap watershed_segment(const GrayImage& elevation) {
  const Index w = elevation.width();
  const Index h = elevation.height();
  if (w < 1 || h < 1) throw ParamError("watershed_segment: empty image");

  LabelMap map;
  map.labels = MatI32::Constant(h, w, -1);  // -1 = unassigned

  // Regional minima: flood each unvisited plateau; it seeds a basin when
  // no plateau pixel has a strictly lower neighbor.
  MatI32& lab = map.labels;
  ArrB visited = ArrB::Constant(h, w, false);
  std::int32_t next_label = 1;
  std::vector<Index> plateau;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (visited(y, x)) continue;
      const std::uint8_t level = elevation.v(y, x);
      plateau.clear();
      plateau.push_back(y * w + x);
      visited(y, x) = true;
      bool is_minimum = true;
      for (std::size_t head = 0; head < plateau.size(); ++head) {
        const Index py = plateau[head] / w;
        const Index px = plateau[head] % w;
        for (int k = 0; k < 8; ++k) {
          const Index ny = py + kDy8[k];
          const Index nx = px + kDx8[k];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const std::uint8_t nv = elevation.v(ny, nx);
          if (nv < level) {
            is_minimum = false;
          } else if (nv == level && !visited(ny, nx)) {
            visited(ny, nx) = true;
            plateau.push_back(ny * w + nx);
          }
        }
      }
      if (is_minimum) {
        for (Index p : plateau) lab(p / w, p % w) = next_label;
        ++next_label;
      } else {
        for (Index p : plateau) visited(p / w, p % w) = true;
      }
    }
  }
  map.basin_count = next_label - 1;

  // Meyer flooding: pop in ascending (elevation, insertion order); a
  // popped pixel joins its single labeled neighborhood or becomes ridge.
  struct Entry {
    std::uint8_t level;
    std::uint64_t seq;
    Index pos;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.level != b.level ? a.level > b.level : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> queue;
  ArrB queued = ArrB::Constant(h, w, false);
  std::uint64_t seq = 0;

  auto push_neighbors = [&](Index y, Index x) {
    for (int k = 0; k < 8; ++k) {
      const Index ny = y + kDy8[k];
      const Index nx = x + kDx8[k];
      if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
      if (lab(ny, nx) == -1 && !queued(ny, nx)) {
        queued(ny, nx) = true;
        queue.push({elevation.v(ny, nx), seq++, ny * w + nx});
      }
    }
  };

  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      if (lab(y, x) > 0) push_neighbors(y, x);

  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    const Index y = e.pos / w;
    const Index x = e.pos % w;
    std::int32_t found = -1;
    bool ridge = false;
    for (int k = 0; k < 8; ++k) {
      const Index ny = y + kDy8[k];
      const Index nx = x + kDx8[k];
      if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
      const std::int32_t nl = lab(ny, nx);
      if (nl > 0) {
        if (found == -1)
          found = nl;
        else if (found != nl)
          ridge = true;
      }
    }
    lab(y, x) = ridge ? 0 : found;
    if (!ridge) push_neighbors(y, x);
  }

  return map;
}

namespace {

// Element offsets relative to its center (odd-sized element assumed).
std::vector<std::pair<int, int>> element_offsets(const BinaryMask& element) {
  const int cy = static_cast<int>(element.height() / 2);
  const int cx = static_cast<int>(element.width() / 2);
  std::vector<std::pair<int, int>> offs;
  for (Index y = 0; y < element.height(); ++y)
    for (Index x = 0; x < element.width(); ++x)
      if (element.m(y, x)) offs.emplace_back(static_cast<int>(x) - cx, static_cast<int>(y) - cy);
  return offs;
}

BinaryMask pad(const BinaryMask& mask, Index p) {
  BinaryMask out = BinaryMask::zeros(mask.width() + 2 * p, mask.height() + 2 * p);
  out.m.block(p, p, mask.height(), mask.width()) = mask.m;
  return out;
}

BinaryMask crop(const BinaryMask& mask, Index p, Index w, Index h) {
  BinaryMask out = BinaryMask::zeros(w, h);
  out.m = mask.m.block(p, p, h, w);
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const BinaryMask& element) {
  const auto offs = element_offsets(element);
  BinaryMask out = BinaryMask::zeros(mask.width(), mask.height());
  for (Index y = 0; y < mask.height(); ++y) {
    for (Index x = 0; x < mask.width(); ++x) {
      bool keep = true;
      for (auto [dx, dy] : offs) {
        const Index ny = y + dy;
        const Index nx = x + dx;
        if (ny < 0 || ny >= mask.height() || nx < 0 || nx >= mask.width() ||
            !mask.m(ny, nx)) {
          keep = false;
          break;
        }
      }
      out.m(y, x) = keep;
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& mask, const BinaryMask& element) {
  const auto offs = element_offsets(element);
  BinaryMask out = BinaryMask::zeros(mask.width(), mask.height());
  for (Index y = 0; y < mask.height(); ++y) {
    for (Index x = 0; x < mask.width(); ++x) {
      bool hit = false;
      for (auto [dx, dy] : offs) {
        const Index ny = y - dy;
        const Index nx = x - dx;
        if (ny >= 0 && ny < mask.height() && nx >= 0 && nx < mask.width() &&
            mask.m(ny, nx)) {
          hit = true;
          break;
        }
      }
      out.m(y, x) = hit;
    }
  }
  return out;
}

BinaryMask morph_open(const BinaryMask& mask, const BinaryMask& element) {
  // Opening shrinks first, so no padding is needed: the dilation of the
  // eroded set cannot reach outside the original extent plus the element
  // radius minus itself. Pad anyway to match the infinite-plane operator.
  const Index p = std::max(element.width(), element.height());
  return crop(dilate(erode(pad(mask, p), element), element), p, mask.width(),
              mask.height());
}

BinaryMask morph_close(const BinaryMask& mask, const BinaryMask& element) {
  const Index p = std::max(element.width(), element.height());
  return crop(erode(dilate(pad(mask, p), element), element), p, mask.width(),
              mask.height());
}

BinaryMask cross3x3() {
  BinaryMask e = BinaryMask::zeros(3, 3);
  e.m(0, 1) = e.m(1, 0) = e.m(1, 1) = e.m(1, 2) = e.m(2, 1) = true;
  return e;
}

GrayImage morph_gradient(const GrayImage& img) {
  GrayImage out = GrayImage::zeros(img.width(), img.height());
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      std::uint8_t lo = img.v(y, x), hi = img.v(y, x);
      const int cross_dx[4] = {1, -1, 0, 0};
      const int cross_dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const Index ny = y + cross_dy[k];
        const Index nx = x + cross_dx[k];
        if (ny < 0 || ny >= img.height() || nx < 0 || nx >= img.width()) continue;
        lo = std::min(lo, img.v(ny, nx));
        hi = std::max(hi, img.v(ny, nx));
      }
      out.v(y, x) = static_cast<std::uint8_t>(hi - lo);
    }
  }
  return out;
}

MatI32 connected_components(const BinaryMask& mask, std::int32_t* count) {
  const Index w = mask.width();
  const Index h = mask.height();
  MatI32 labels = MatI32::Zero(h, w);
  std::int32_t next = 0;
  std::vector<Index> stack;
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (!mask.m(y, x) || labels(y, x) != 0) continue;
      ++next;
      labels(y, x) = next;
      stack.assign(1, y * w + x);
      while (!stack.empty()) {
        const Index p = stack.back();
        stack.pop_back();
        const Index py = p / w;
        const Index px = p % w;
        for (int k = 0; k < 8; ++k) {
          const Index ny = py + kDy8[k];
          const Index nx = px + kDx8[k];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          if (mask.m(ny, nx) && labels(ny, nx) == 0) {
            labels(ny, nx) = next;
            stack.push_back(ny * w + nx);
          }
        }
      }
    }
  }
  if (count) *count = next;
  return labels;
}

BinaryMask drop_small_components(const BinaryMask& mask, Index min_px) {
  std::int32_t n = 0;
  MatI32 labels = connected_components(mask, &n);
  std::vector<Index> sizes(static_cast<std::size_t>(n) + 1, 0);
  for (Index y = 0; y < mask.height(); ++y)
    for (Index x = 0; x < mask.width(); ++x) ++sizes[labels(y, x)];
  BinaryMask out = BinaryMask::zeros(mask.width(), mask.height());
  for (Index y = 0; y < mask.height(); ++y)
    for (Index x = 0; x < mask.width(); ++x)
      out.m(y, x) = labels(y, x) > 0 && sizes[labels(y, x)] >= min_px;
  return out;
}

BinaryMask leaf_mask(const RgbImage& img, const SegmentationParams& params) {
  const RgbImage balanced = gray_world_normalize(img);
  const HsvImage hsv = rgb_to_hsv(balanced);
  const GrayImage hue = hue_plane_u8(hsv);
  const GrayImage smoothed =
      bilateral_filter(hue, params.bilateral_spatial_sigma,
                       params.bilateral_range_sigma, params.bilateral_radius);
  // The watershed floods the gradient of the smoothed hue: homogeneous
  // regions are basins and hue edges are the ridges separating them.
  const LabelMap basins = watershed_segment(morph_gradient(smoothed));

  const Index w = img.width();
  const Index h = img.height();
  const std::int32_t n = basins.basin_count;

  std::vector<Scalar> sat_sum(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> area(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> border(static_cast<std::size_t>(n) + 1, 0);
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      const std::int32_t l = basins.labels(y, x);
      if (l <= 0) continue;
      sat_sum[l] += hsv.s(y, x);
      ++area[l];
      if (y == 0 || y == h - 1 || x == 0 || x == w - 1) ++border[l];
    }
  }

  std::vector<Scalar> sats(hsv.s.data(), hsv.s.data() + hsv.s.size());
  std::nth_element(sats.begin(), sats.begin() + sats.size() / 2, sats.end());
  const Scalar median_sat = sats[sats.size() / 2];
  const Index border_total = w > 1 && h > 1 ? 2 * (w + h) - 4 : w * h;

  std::vector<char> keep(static_cast<std::size_t>(n) + 1, 0);
  for (std::int32_t l = 1; l <= n; ++l) {
    const bool saturated = sat_sum[l] / area[l] > median_sat;
    const bool interior =
        static_cast<Scalar>(border[l]) <
        params.border_touch_fraction * static_cast<Scalar>(border_total);
    keep[l] = saturated && interior;
  }

  BinaryMask selected = BinaryMask::zeros(w, h);
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x)
      if (basins.labels(y, x) > 0) selected.m(y, x) = keep[basins.labels(y, x)];

  // Ridge pixels carry no basin; they join the mask when they border a
  // kept basin, so boundaries between adjacent kept basins do not remain
  // as one-pixel cracks.
  for (Index y = 0; y < h; ++y) {
    for (Index x = 0; x < w; ++x) {
      if (basins.labels(y, x) != 0) continue;
      for (int dy = -1; dy <= 1 && !selected.m(y, x); ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Index ny = y + dy;
          const Index nx = x + dx;
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          const std::int32_t nl = basins.labels(ny, nx);
          if (nl > 0 && keep[nl]) {
            selected.m(y, x) = true;
            break;
          }
        }
    }
  }

  const BinaryMask element = cross3x3();
  BinaryMask cleaned = drop_small_components(
      morph_close(morph_open(selected, element), element),
      params.min_component_px);
  if (cleaned.empty())
    throw NoLeafError("no-leaf-found: mask empty after cleanup (" +
                          std::to_string(n) + " watershed basins)",
                      n);
  return cleaned;
}

namespace {

using Wide = __int128;

// sigma_B^2(t) = (S0 W - S w0)^2 / (W^2 w0 w1): comparing thresholds only
// needs the integer quantities N(t) = S0 W - S w0 and w0 w1. The cross
// product N^2 * w0 w1 stays inside 128 bits for any histogram of up to
// ~400k tallies, so the argmax and its ties are exact there; larger
// tallies fall back to long double.
struct OtsuTerms {
  Wide num_sq;  // N(t)^2
  Wide den;     // w0 * w1
};

// -1: a < b, 0: equal, +1: a > b
int objective_compare(const OtsuTerms& a, const OtsuTerms& b, bool exact) {
  if (exact) {
    const Wide lhs = a.num_sq * b.den;
    const Wide rhs = b.num_sq * a.den;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
  }
  const long double lhs =
      static_cast<long double>(a.num_sq) * static_cast<long double>(b.den);
  const long double rhs =
      static_cast<long double>(b.num_sq) * static_cast<long double>(a.den);
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

}  // namespace

int otsu_threshold(const Histogram256& hist) {
  const std::uint64_t total = hist.total();
  if (total < 2 || hist.occupied_levels() < 2)
    throw DegenerateHistogramError(
        "otsu_threshold: histogram needs at least two occupied levels");

  std::uint64_t sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += static_cast<std::uint64_t>(i) * hist.counts[i];

  const bool exact = total <= 300000;
  std::uint64_t w0 = 0, s0 = 0;
  OtsuTerms best{-1, 1};
  std::vector<int> ties;
  for (int t = 0; t < 256; ++t) {
    w0 += hist.counts[t];
    s0 += static_cast<std::uint64_t>(t) * hist.counts[t];
    const std::uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const Wide n = static_cast<Wide>(s0) * static_cast<Wide>(total) -
                   static_cast<Wide>(sum_all) * static_cast<Wide>(w0);
    const OtsuTerms cur{n * n, static_cast<Wide>(w0) * static_cast<Wide>(w1)};
    const int cmp = ties.empty() ? 1 : objective_compare(cur, best, exact);
    if (cmp > 0) {
      best = cur;
      ties.assign(1, t);
    } else if (cmp == 0) {
      ties.push_back(t);
    }
  }

  long long sum_t = 0;
  for (int t : ties) sum_t += t;
  return static_cast<int>(sum_t / static_cast<long long>(ties.size()));
}

Scalar otsu_objective(const Histogram256& hist, int t) {
  const std::uint64_t total = hist.total();
  if (total == 0) throw DegenerateHistogramError("otsu_objective: empty histogram");
  std::uint64_t w0 = 0, s0 = 0, sum_all = 0;
  for (int i = 0; i < 256; ++i) {
    sum_all += static_cast<std::uint64_t>(i) * hist.counts[i];
    if (i <= t) {
      w0 += hist.counts[i];
      s0 += static_cast<std::uint64_t>(i) * hist.counts[i];
    }
  }
  const std::uint64_t w1 = total - w0;
  if (w0 == 0 || w1 == 0) return 0;
  const Scalar mu0 = static_cast<Scalar>(s0) / static_cast<Scalar>(w0);
  const Scalar mu1 = static_cast<Scalar>(sum_all - s0) / static_cast<Scalar>(w1);
  const Scalar om0 = static_cast<Scalar>(w0) / static_cast<Scalar>(total);
  const Scalar om1 = static_cast<Scalar>(w1) / static_cast<Scalar>(total);
  return om0 * om1 * (mu0 - mu1) * (mu0 - mu1);
}

BinaryMask diseased_region_mask(const GrayImage& gray, const BinaryMask& leaf,
                                LesionPolarity polarity) {
  if (leaf.empty()) throw ParamError("diseased_region_mask: leaf mask is empty");
  const Histogram256 hist = histogram(gray, leaf);
  const int t = otsu_threshold(hist);

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
  const Scalar mu0 = static_cast<Scalar>(s0) / static_cast<Scalar>(w0);
  const Scalar mu1 = static_cast<Scalar>(s1) / static_cast<Scalar>(w1);
  const bool low_side_is_lesion =
      polarity == LesionPolarity::Dark ? mu0 <= mu1 : mu0 > mu1;

  BinaryMask out = BinaryMask::zeros(gray.width(), gray.height());
  for (Index y = 0; y < gray.height(); ++y)
    for (Index x = 0; x < gray.width(); ++x)
      out.m(y, x) =
          leaf.m(y, x) && ((gray.v(y, x) <= t) == low_side_is_lesion);
  return out;
}

}  // namespace leafsight
