#pragma once

#include <string_view>

namespace apelt {

/// Label of a segment in the alternating model.
enum class State { Normal, Epidemic };

constexpr State flip(State s) noexcept {
  return s == State::Normal ? State::Epidemic : State::Normal;
}

constexpr std::string_view to_string(State s) noexcept {
  return s == State::Normal ? "normal" : "epidemic";
}

}  // namespace apelt
