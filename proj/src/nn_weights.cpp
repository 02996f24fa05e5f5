#include "embedfield/nn_weights.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace embedfield {

void WeightBundle::validate() const {
  for (std::size_t k = 0; k < 6; ++k) {
    if (!(x_scaler.max[k] > x_scaler.min[k]) || !(y_scaler.max[k] > y_scaler.min[k])) {
      throw std::invalid_argument("weight bundle: scaler component " + std::to_string(k) +
                                  " has max <= min");
    }
  }
}

WeightBundle build_exact_nn_weights(const LameParams& p, const StrainRange& range) {
  range.validate();
  const Matrix6 c = stiffness_matrix(p);

  WeightBundle w;
  w.x_scaler.min = range.min;
  w.x_scaler.max = range.max;

  // Each stress component is linear in strain, so its extremes over the box
  // come from picking the min or max corner per input independently.
  for (std::size_t k = 0; k < 6; ++k) {
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double a = c[k][j] * range.min[j];
      const double b = c[k][j] * range.max[j];
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    if (!(hi > lo)) {
      throw std::invalid_argument("build_exact_nn_weights: stress component " + std::to_string(k) +
                                  " is constant over the strain range");
    }
    w.y_scaler.min[k] = lo;
    w.y_scaler.max[k] = hi;
  }

  for (std::size_t j = 0; j < kNnInputs; ++j) w.w0[j][j] = 1.0;

  for (std::size_t k = 0; k < kNnOutputs; ++k) {
    const double dy = w.y_scaler.max[k] - w.y_scaler.min[k];
    double offset = -w.y_scaler.min[k];
    for (std::size_t j = 0; j < kNnInputs; ++j) {
      const double dx = range.max[j] - range.min[j];
      w.w1[j][k] = c[k][j] * dx / dy;
      offset += c[k][j] * range.min[j];
    }
    w.b1[k] = offset / dy;
  }
  return w;
}

FieldBuffer nn_forward(const WeightBundle& w, const FieldBuffer& strain) {
  require_components(strain, kNnInputs, "nn_forward");
  FieldBuffer out(strain.elements(), kNnOutputs);
  std::array<double, kNnInputs> x{};
  std::array<double, kNnHidden> h{};
  for (std::size_t i = 0; i < strain.elements(); ++i) {
    const auto e = strain.row(i);
    for (std::size_t j = 0; j < kNnInputs; ++j) x[j] = w.x_scaler.transform(j, e[j]);
    for (std::size_t u = 0; u < kNnHidden; ++u) {
      double acc = w.b0[u];
      for (std::size_t j = 0; j < kNnInputs; ++j) acc += x[j] * w.w0[j][u];
      h[u] = std::max(0.0, acc);
    }
    auto s = out.row(i);
    for (std::size_t k = 0; k < kNnOutputs; ++k) {
      double acc = w.b1[k];
      for (std::size_t u = 0; u < kNnHidden; ++u) acc += h[u] * w.w1[u][k];
      s[k] = w.y_scaler.inverse(k, acc);
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const WeightBundle& w) {
  auto scaler = [](const MinMaxScaler& s) { return nlohmann::json{{"min", s.min}, {"max", s.max}}; };
  j = nlohmann::json{{"w0", w.w0},       {"b0", w.b0},
                     {"w1", w.w1},       {"b1", w.b1},
                     {"x_scaler", scaler(w.x_scaler)}, {"y_scaler", scaler(w.y_scaler)}};
}

namespace {

template <std::size_t N>
void read_vector(const nlohmann::json& j, const char* key, std::array<double, N>& out) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != N) {
    throw std::invalid_argument(std::string("weight bundle: '") + key + "' must have " +
                                std::to_string(N) + " entries");
  }
  for (std::size_t k = 0; k < N; ++k) out[k] = v[k].get<double>();
}

template <std::size_t R, std::size_t C>
void read_matrix(const nlohmann::json& j, const char* key,
                 std::array<std::array<double, C>, R>& out) {
  const auto& m = j.at(key);
  if (!m.is_array() || m.size() != R) {
    throw std::invalid_argument(std::string("weight bundle: '") + key + "' must have " +
                                std::to_string(R) + " rows");
  }
  for (std::size_t r = 0; r < R; ++r) {
    if (!m[r].is_array() || m[r].size() != C) {
      throw std::invalid_argument(std::string("weight bundle: '") + key + "' rows must have " +
                                  std::to_string(C) + " columns");
    }
    for (std::size_t c = 0; c < C; ++c) out[r][c] = m[r][c].get<double>();
  }
}

}  // namespace

void from_json(const nlohmann::json& j, WeightBundle& w) {
  read_matrix(j, "w0", w.w0);
  read_vector(j, "b0", w.b0);
  read_matrix(j, "w1", w.w1);
  read_vector(j, "b1", w.b1);
  read_vector(j.at("x_scaler"), "min", w.x_scaler.min);
  read_vector(j.at("x_scaler"), "max", w.x_scaler.max);
  read_vector(j.at("y_scaler"), "min", w.y_scaler.min);
  read_vector(j.at("y_scaler"), "max", w.y_scaler.max);
  w.validate();
}

void save_weights(const std::filesystem::path& path, const WeightBundle& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  // nlohmann emits round-trip-exact doubles.
  out << nlohmann::json(w).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

WeightBundle load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in).get<WeightBundle>();
}

}  // namespace embedfield
