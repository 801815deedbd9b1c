#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "cascade_vqa/ansatz.hpp"

namespace cvqa::vqa {

enum class StrategyKind { Cold, Uniform, Cascade };

std::string_view strategy_name(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

/// Every parameter ~ Uniform[-pi, pi).
std::vector<double> init_cold(const ansatz::AnsatzSpec& spec, std::uint64_t seed);

/// First rotation block prepares |+>^n (RY = pi/2, RX = 0); every other
/// parameter ~ Uniform[-0.01, 0.01].
std::vector<double> init_uniform(const ansatz::AnsatzSpec& spec, std::uint64_t seed);

}  // namespace cvqa::vqa
