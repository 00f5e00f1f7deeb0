#include "ctap/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace ctap {

namespace {

// Emit states in lexicographically descending order directly: the leading
// mode takes the largest remaining occupation first, then recurse.
void enumerate_rec(int slots_left, int photons_left, FockState& prefix,
                   std::vector<FockState>& out) {
  if (slots_left == 1) {
    prefix.push_back(photons_left);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int n = photons_left; n >= 0; --n) {
    prefix.push_back(n);
    enumerate_rec(slots_left - 1, photons_left - n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

int FockBasis::index_of(const FockState& state) const {
  auto it = index.find(state);
  if (it == index.end()) {
    // Spell the occupations out by hand: state_label() would reject
    // occupations outside 0..9, and this must throw out_of_range for every
    // state that is not in the basis.
    std::string repr;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (i > 0) repr += ',';
      repr += std::to_string(state[i]);
    }
    throw std::out_of_range("state (" + repr + ") is not in the " +
                            std::to_string(total_photons) +
                            "-photon basis over " + std::to_string(mode_count) +
                            " modes");
  }
  return it->second;
}

FockBasis enumerate_basis(int mode_count, int total_photons) {
  if (mode_count < 1) {
    throw std::invalid_argument("enumerate_basis: mode_count must be >= 1");
  }
  if (total_photons < 0) {
    throw std::invalid_argument("enumerate_basis: total_photons must be >= 0");
  }
  FockBasis basis;
  basis.mode_count = mode_count;
  basis.total_photons = total_photons;
  FockState prefix;
  prefix.reserve(mode_count);
  enumerate_rec(mode_count, total_photons, prefix, basis.states);
  for (int k = 0; k < basis.size(); ++k) {
    basis.index.emplace(basis.states[k], k);
  }
  return basis;
}

std::optional<std::pair<FockState, double>> apply_hopping(const FockState& state,
                                                          int dest, int src) {
  const int modes = static_cast<int>(state.size());
  if (dest < 0 || dest >= modes || src < 0 || src >= modes) {
    throw std::out_of_range("apply_hopping: mode index out of range");
  }
  if (dest == src) {
    throw std::invalid_argument("apply_hopping: dest and src must differ");
  }
  if (state[src] == 0) {
    return std::nullopt;  // annihilating the vacuum of the source mode
  }
  FockState next = state;
  const double amplitude =
      std::sqrt(static_cast<double>(next[dest] + 1)) * std::sqrt(static_cast<double>(next[src]));
  next[src] -= 1;
  next[dest] += 1;
  return std::make_pair(std::move(next), amplitude);
}

std::string state_label(const FockState& state) {
  std::string label;
  label.reserve(state.size());
  for (int n : state) {
    if (n < 0 || n > 9) {
      throw std::invalid_argument(
          "state_label: occupations must be single digits (0..9)");
    }
    label.push_back(static_cast<char>('0' + n));
  }
  return label;
}

}  // namespace ctap
