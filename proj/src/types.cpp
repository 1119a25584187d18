#include "filippov/types.hpp"

namespace filippov {

std::string_view to_string(PsiMode mode) noexcept {
  return mode == PsiMode::Harvest ? "Harvest" : "NonHarvest";
}

std::string_view to_string(FieldTag field) noexcept {
  switch (field) {
    case FieldTag::NonHarvest: return "NonHarvest";
    case FieldTag::Harvest: return "Harvest";
    case FieldTag::Sliding: return "Sliding";
  }
  return "?";
}

std::string_view to_string(EquilibriumKind kind) noexcept {
  switch (kind) {
    case EquilibriumKind::Trivial: return "Trivial";
    case EquilibriumKind::SemiTrivial: return "SemiTrivial";
    case EquilibriumKind::Interior: return "Interior";
    case EquilibriumKind::Pseudo: return "Pseudo";
    case EquilibriumKind::Boundary: return "Boundary";
  }
  return "?";
}

std::string_view to_string(Placement placement) noexcept {
  switch (placement) {
    case Placement::Regular: return "Regular";
    case Placement::Virtual: return "Virtual";
    case Placement::OnBoundary: return "OnBoundary";
    case Placement::NotApplicable: return "NotApplicable";
  }
  return "?";
}

std::string_view to_string(Stability stability) noexcept {
  switch (stability) {
    case Stability::Stable: return "Stable";
    case Stability::Unstable: return "Unstable";
    case Stability::Inconclusive: return "Inconclusive";
  }
  return "?";
}

}  // namespace filippov
