#pragma once

#include "gmfit/gmm_core.hpp"

#include <string>
#include <string_view>

namespace gmfit {

/// {"components":[{"weight":w,"mean":m,"std":s},...]}
std::string model_to_json(const MixtureModel& model);

/// Throws DomainError naming the offending field or violated invariant.
MixtureModel model_from_json(std::string_view text);

}  // namespace gmfit
