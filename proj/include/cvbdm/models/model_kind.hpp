#ifndef CVBDM_MODELS_MODEL_KIND_HPP
#define CVBDM_MODELS_MODEL_KIND_HPP

#include "cvbdm/error.hpp"

#include <array>
#include <string>
#include <string_view>

namespace cvbdm {

enum class ModelKind { normal, invgauss, skewnormal, negbin };

inline constexpr std::array kAllModels = {ModelKind::normal, ModelKind::invgauss,
                                          ModelKind::skewnormal, ModelKind::negbin};

inline const char* to_string(ModelKind model) noexcept {
  switch (model) {
    case ModelKind::normal: return "normal";
    case ModelKind::invgauss: return "invgauss";
    case ModelKind::skewnormal: return "skewnormal";
    case ModelKind::negbin: return "negbin";
  }
  return "normal";
}

inline ModelKind parse_model(std::string_view name) {
  for (ModelKind m : kAllModels) {
    if (name == to_string(m)) return m;
  }
  throw InputError("unknown model '" + std::string(name) +
                   "' (expected normal, invgauss, skewnormal or negbin)");
}

}  // namespace cvbdm

#endif  // CVBDM_MODELS_MODEL_KIND_HPP
