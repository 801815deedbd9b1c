#include "cascade_vqa/vqa/init.hpp"

#include <numbers>
#include <random>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/rng.hpp"

namespace cvqa::vqa {

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Cold: return "cold";
    case StrategyKind::Uniform: return "uniform";
    case StrategyKind::Cascade: return "cascade";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  if (name == "cold") return StrategyKind::Cold;
  if (name == "uniform") return StrategyKind::Uniform;
  if (name == "cascade") return StrategyKind::Cascade;
  throw ConfigError("strategy must be 'cold', 'uniform' or 'cascade'");
}

std::vector<double> init_cold(const ansatz::AnsatzSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::vector<double> params(static_cast<std::size_t>(spec.param_count()));
  for (auto& p : params) p = uniform(rng, -std::numbers::pi, std::numbers::pi);
  return params;
}

std::vector<double> init_uniform(const ansatz::AnsatzSpec& spec, std::uint64_t seed) {
  const auto circuit = ansatz::build(spec);
  std::mt19937_64 rng(seed);
  std::vector<double> params(static_cast<std::size_t>(circuit.param_count));
  for (std::size_t slot = 0; slot < params.size(); ++slot) {
    const auto& info = circuit.slots[slot];
    if (info.block == 0) {
      params[slot] = info.kind == qsim::GateKind::RY ? 0.5 * std::numbers::pi : 0.0;
    } else {
      params[slot] = uniform(rng, -0.01, 0.01);
    }
  }
  return params;
}

}  // namespace cvqa::vqa
