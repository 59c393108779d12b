#ifndef LEAFSIGHT_TESTS_FIXTURES_HPP
#define LEAFSIGHT_TESTS_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "leafsight/dataset.hpp"
#include "leafsight/image.hpp"

namespace leafsight::testing {

// Uniform colored disk on a uniform background.
RgbImage disk_image(Index size, Index cx, Index cy, Index radius,
                    std::array<std::uint8_t, 3> disk,
                    std::array<std::uint8_t, 3> background);

BinaryMask disk_mask(Index size, Index cx, Index cy, Index radius);

// Synthetic diseased leaf: green disk on gray background with a darker
// textured lesion blotch whose pattern depends on the class id (0..4).
RgbImage textured_leaf(Index size, int class_id, std::uint64_t seed);

// The analytic lesion disk used by textured_leaf (for IoU-style checks).
BinaryMask textured_leaf_lesion(Index size);

// Writes a class-per-directory PPM corpus of textured leaves.
// Classes are named d0..d{classes-1}.
void write_leaf_corpus(const std::string& root, int classes, int per_class,
                       Index size, std::uint64_t seed);

// Stage-1 gate families: smooth radial-gradient disks (healthy) vs
// high-frequency checkered disks (diseased), on a gray background.
GrayImage gate_image(bool healthy, Index size, std::uint64_t seed);

// Writes a two-class corpus (sweet_healthy / sweet_blight) of gate images
// as PPM files.
void write_gate_corpus(const std::string& root, int per_class, Index size,
                       std::uint64_t seed);

// Gaussian blob (dark on bright) rendered analytically.
GrayImage gaussian_blob_image(Index size, Scalar cx, Scalar cy, Scalar sigma,
                              Scalar amplitude = 150, std::uint8_t background = 200);

// Isotropic Gaussian class blobs in `dims` dimensions with unit class
// separation `spread` between adjacent centers.
Dataset gaussian_blobs(int classes, int per_class, int dims, Scalar spread,
                       Scalar noise, std::uint64_t seed);

// 300-row set with 3 informative features (8 latent classes on the unit
// cube corners) and `noise_features` uniform noise columns.
Dataset informative_plus_noise(int rows, int noise_features, Scalar noise_sigma,
                               std::uint64_t seed);

}  // namespace leafsight::testing

#endif
