#include "wrec/similarity.hpp"

#include <array>
#include <string>
#include <utility>

#include "wrec/errors.hpp"

namespace wrec {
namespace {

constexpr std::array<std::pair<SimilarityKind, std::string_view>, 6> kKindNames{{
    {SimilarityKind::ridge, "ridge"},
    {SimilarityKind::ease, "ease"},
    {SimilarityKind::zca, "zca"},
    {SimilarityKind::embed_dot, "embed_dot"},
    {SimilarityKind::embed_ridge, "embed_ridge"},
    {SimilarityKind::embed_ease, "embed_ease"},
}};

}  // namespace

std::string_view to_string(SimilarityKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string_view to_string(RidgeForm form) {
  switch (form) {
    case RidgeForm::primal:
      return "primal";
    case RidgeForm::dual:
      return "dual";
    case RidgeForm::automatic:
      return "auto";
  }
  return "unknown";
}

SimilarityKind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

RidgeForm parse_form(std::string_view name) {
  if (name == "primal") return RidgeForm::primal;
  if (name == "dual") return RidgeForm::dual;
  if (name == "auto") return RidgeForm::automatic;
  throw ConfigError("unknown ridge form '" + std::string(name) + "'");
}

}  // namespace wrec
