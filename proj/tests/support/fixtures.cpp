#include "fixtures.hpp"

#include <cmath>
#include <filesystem>

namespace leafsight::testing {

namespace fs = std::filesystem;

RgbImage disk_image(Index size, Index cx, Index cy, Index radius,
                    std::array<std::uint8_t, 3> disk,
                    std::array<std::uint8_t, 3> background) {
  RgbImage img = RgbImage::zeros(size, size);
  for (Index y = 0; y < size; ++y) {
    for (Index x = 0; x < size; ++x) {
      const bool in = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
      const auto& c = in ? disk : background;
      img.set(x, y, c[0], c[1], c[2]);
    }
  }
  return img;
}

BinaryMask disk_mask(Index size, Index cx, Index cy, Index radius) {
  BinaryMask m = BinaryMask::zeros(size, size);
  for (Index y = 0; y < size; ++y)
    for (Index x = 0; x < size; ++x)
      m.m(y, x) = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
  return m;
}

namespace {

std::uint8_t jitter(std::mt19937_64& rng, int base, int amount) {
  std::uniform_int_distribution<int> d(-amount, amount);
  const int v = base + d(rng);
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

}  // namespace

RgbImage textured_leaf(Index size, int class_id, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index c = size / 2;
  const Index leaf_r = (size * 36) / 100;
  const Index lesion_r = (size * 15) / 100;

  // Each class is a crosswise pair of (geometry, contrast) modes: class i
  // draws either geometry i at low tone contrast or geometry i+2 at high
  // contrast. No single feature group identifies the class; the label
  // depends on the interaction, which is what separates the polynomial
  // kernels from the linear one on this corpus.
  const bool high_contrast = rng() % 2 == 1;
  const int geometry = high_contrast ? (class_id + 2) % 5 : class_id % 5;
  std::uniform_int_distribution<int> shift_d(-4, 4);
  const int shift = shift_d(rng);
  // Both tones stay far enough below leaf tissue that the histogram split
  // recovers the whole blotch rather than its darker cells, and carry
  // enough channel asymmetry to read as saturated rusty brown (the basin
  // selection keys on saturation).
  const int gap = high_contrast ? 38 : 18;
  const int mid = (high_contrast ? 50 : 56) + shift;
  const int dark[3] = {mid + 12 - gap / 2, mid - 4 - gap / 2, mid - 14 - gap / 2};
  const int light[3] = {mid + 12 + gap / 2, mid - 4 + gap / 2, mid - 14 + gap / 2};

  RgbImage img = RgbImage::zeros(size, size);
  for (Index y = 0; y < size; ++y) {
    for (Index x = 0; x < size; ++x) {
      const Index d2 = (x - c) * (x - c) + (y - c) * (y - c);
      if (d2 > leaf_r * leaf_r) {
        img.set(x, y, 150, 150, 150);  // desaturated background
        continue;
      }
      if (d2 <= lesion_r * lesion_r) {
        // Lesion texture: two tones arranged per geometry, with cell
        // sizes the interest-point scales can resolve. Tone luminances
        // sit well below leaf tissue so the Otsu split recovers the
        // whole blotch.
        bool tone = false;
        switch (geometry) {
          case 0: tone = ((x / 3) + (y / 3)) % 2 == 0; break;        // fine checker
          case 1: tone = (y / 4) % 2 == 0; break;                    // horizontal stripes
          case 2: tone = (x / 6) % 2 == 0; break;                    // wide vertical stripes
          case 3: tone = (((x - y) / 4) % 2 + 2) % 2 == 0; break;    // diagonal stripes
          case 4: tone = ((x / 5) + (y / 5)) % 2 == 0; break;        // coarse checker
        }
        const int* t = tone ? dark : light;
        img.set(x, y, jitter(rng, t[0], 3), jitter(rng, t[1], 3), jitter(rng, t[2], 3));
        continue;
      }
      // healthy leaf tissue
      img.set(x, y, jitter(rng, 74, 6), jitter(rng, 150, 6), jitter(rng, 66, 6));
    }
  }
  return img;
}

BinaryMask textured_leaf_lesion(Index size) {
  const Index c = size / 2;
  return disk_mask(size, c, c, (size * 15) / 100);
}

void write_leaf_corpus(const std::string& root, int classes, int per_class,
                       Index size, std::uint64_t seed) {
  for (int c = 0; c < classes; ++c) {
    const fs::path dir = fs::path(root) / ("d" + std::to_string(c));
    fs::create_directories(dir);
    for (int i = 0; i < per_class; ++i) {
      const RgbImage img =
          textured_leaf(size, c, seed * 100003 + c * 1009 + i);
      char name[32];
      std::snprintf(name, sizeof(name), "img_%03d.ppm", i);
      write_ppm_file((dir / name).string(), img);
    }
  }
}

GrayImage gate_image(bool healthy, Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> base_d(140, 200);
  std::uniform_int_distribution<int> contrast_d(60, 110);
  std::uniform_int_distribution<int> period_d(4, 6);  // cells the detector sees
  const int base = base_d(rng);
  const int contrast = contrast_d(rng);
  const int period = period_d(rng);

  const Index c = size / 2;
  const Index r = (size * 38) / 100;

  // Healthy leaves carry a handful of soft blobs (veins/speckles), so
  // the detector still fires somewhere; diseased ones carry dense
  // high-frequency checker texture.
  std::vector<std::array<Scalar, 3>> spots;  // x, y, sigma
  if (healthy) {
    std::uniform_real_distribution<Scalar> pos(-0.55, 0.55);
    std::uniform_real_distribution<Scalar> sig(2.4, 3.4);
    for (int s = 0; s < 6; ++s)
      spots.push_back({c + pos(rng) * r, c + pos(rng) * r, sig(rng)});
  }

  GrayImage img = GrayImage::constant(size, size, 40);
  for (Index y = 0; y < size; ++y) {
    for (Index x = 0; x < size; ++x) {
      const Scalar d = std::sqrt(Scalar((x - c) * (x - c) + (y - c) * (y - c)));
      if (d > r) continue;
      if (healthy) {
        Scalar v = base - 25 * d / r;  // smooth radial shading
        for (const auto& s : spots) {
          const Scalar d2 = (x - s[0]) * (x - s[0]) + (y - s[1]) * (y - s[1]);
          v -= 70 * std::exp(-d2 / (2 * s[2] * s[2]));
        }
        img.v(y, x) = static_cast<std::uint8_t>(
            std::clamp<int>(static_cast<int>(std::lround(v)), 0, 255));
      } else {
        const bool on = ((x / period) + (y / period)) % 2 == 0;
        img.v(y, x) = static_cast<std::uint8_t>(
            std::clamp<int>(on ? base : base - contrast, 0, 255));
      }
    }
  }
  return img;
}

void write_gate_corpus(const std::string& root, int per_class, Index size,
                       std::uint64_t seed) {
  const fs::path healthy_dir = fs::path(root) / "sweet_healthy";
  const fs::path diseased_dir = fs::path(root) / "sweet_blight";
  fs::create_directories(healthy_dir);
  fs::create_directories(diseased_dir);
  for (int i = 0; i < per_class; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img_%03d.ppm", i);
    for (int cls = 0; cls < 2; ++cls) {
      const GrayImage g = gate_image(cls == 0, size, seed * 7919 + i * 2 + cls);
      // Saturate the disk green (single hue, luminance pattern kept) and
      // put it on a gray background so the leaf mask can find it.
      RgbImage rgb = RgbImage::zeros(size, size);
      const Index c = size / 2;
      const Index r = (size * 38) / 100;
      for (Index y = 0; y < size; ++y) {
        for (Index x = 0; x < size; ++x) {
          if ((x - c) * (x - c) + (y - c) * (y - c) > r * r) {
            rgb.set(x, y, 120, 120, 120);
            continue;
          }
          const Scalar v = g.v(y, x);
          rgb.set(x, y, clamp_u8(v * 0.55), clamp_u8(v * 1.0), clamp_u8(v * 0.45));
        }
      }
      write_ppm_file(((cls == 0 ? healthy_dir : diseased_dir) / name).string(), rgb);
    }
  }
}

GrayImage gaussian_blob_image(Index size, Scalar cx, Scalar cy, Scalar sigma,
                              Scalar amplitude, std::uint8_t background) {
  GrayImage img = GrayImage::zeros(size, size);
  for (Index y = 0; y < size; ++y) {
    for (Index x = 0; x < size; ++x) {
      const Scalar d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const Scalar v = background - amplitude * std::exp(-d2 / (2 * sigma * sigma));
      img.v(y, x) = static_cast<std::uint8_t>(std::clamp<int>(
          static_cast<int>(std::lround(v)), 0, 255));
    }
  }
  return img;
}

Dataset gaussian_blobs(int classes, int per_class, int dims, Scalar spread,
                       Scalar noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> n(0, noise);
  Dataset data;
  for (int c = 0; c < classes; ++c) data.classes.push_back("c" + std::to_string(c));
  for (int j = 0; j < dims; ++j) data.feature_names.push_back("f" + std::to_string(j));
  data.x.resize(classes * per_class, dims);
  Index row = 0;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < per_class; ++i, ++row) {
      for (int j = 0; j < dims; ++j) {
        // centers at spread * c along dimension (c % dims), 0 elsewhere
        const Scalar center = (j == c % dims) ? spread * (1 + c / dims) : 0;
        data.x(row, j) = center + n(rng);
      }
      data.labels.push_back(c);
    }
  }
  return data;
}

Dataset informative_plus_noise(int rows, int noise_features, Scalar noise_sigma,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> g(0, noise_sigma);
  std::uniform_real_distribution<Scalar> u(0, 1);

  Dataset data;
  for (int c = 0; c < 8; ++c) data.classes.push_back("c" + std::to_string(c));
  data.feature_names = {"inf0", "inf1", "inf2"};
  for (int j = 0; j < noise_features; ++j)
    data.feature_names.push_back("noise" + std::to_string(j));
  data.x.resize(rows, 3 + noise_features);
  for (int i = 0; i < rows; ++i) {
    const int cls = i % 8;  // binary corner encoding: each informative
    data.labels.push_back(cls);  // feature resolves one bit
    for (int bit = 0; bit < 3; ++bit)
      data.x(i, bit) = ((cls >> bit) & 1) * Scalar(2) + g(rng);
    for (int j = 0; j < noise_features; ++j) data.x(i, 3 + j) = u(rng);
  }
  return data;
}

}  // namespace leafsight::testing
