#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "embedfield/constitutive.hpp"
#include "embedfield/field.hpp"

namespace embedfield {

inline constexpr std::size_t kNnInputs = 6;
inline constexpr std::size_t kNnHidden = 20;
inline constexpr std::size_t kNnOutputs = 6;

/// Per-component affine map of [min, max] onto [0, 1].
struct MinMaxScaler {
  std::array<double, 6> min{};
  std::array<double, 6> max{};

  double transform(std::size_t k, double v) const { return (v - min[k]) / (max[k] - min[k]); }
  double inverse(std::size_t k, double v) const { return v * (max[k] - min[k]) + min[k]; }
};

/// Weights of a 6 -> 20 (ReLU) -> 6 (linear) network plus its input and
/// output scalers. Matrices are row-major with inputs along rows, so a
/// layer computes x . w + b.
struct WeightBundle {
  std::array<std::array<double, kNnHidden>, kNnInputs> w0{};
  std::array<double, kNnHidden> b0{};
  std::array<std::array<double, kNnOutputs>, kNnHidden> w1{};
  std::array<double, kNnOutputs> b1{};
  MinMaxScaler x_scaler;
  MinMaxScaler y_scaler;

  /// Throws std::invalid_argument when a scaler has max <= min.
  void validate() const;
};

/// Constructs weights that reproduce Hooke's law exactly on `range`.
///
/// Min-max scaled inputs are non-negative, so routing them through the first
/// six hidden units with unit weights and zero bias makes the ReLU layer an
/// identity. The output layer then carries the affine map from scaled strain
/// to scaled stress, built from the stiffness and both scalers. The output
/// scaler spans the image of the strain box under the stiffness.
WeightBundle build_exact_nn_weights(const LameParams& p, const StrainRange& range);

/// Host-side forward pass: scale, dense + ReLU, dense, inverse-scale.
FieldBuffer nn_forward(const WeightBundle& w, const FieldBuffer& strain);

void to_json(nlohmann::json& j, const WeightBundle& w);
/// Rejects missing keys, wrong layer shapes and degenerate scalers.
void from_json(const nlohmann::json& j, WeightBundle& w);

void save_weights(const std::filesystem::path& path, const WeightBundle& w);
WeightBundle load_weights(const std::filesystem::path& path);

}  // namespace embedfield
