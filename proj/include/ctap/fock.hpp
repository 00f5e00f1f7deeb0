#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ctap {

/// Occupation-number vector: occupations[m] = photons in mode m.
/// Mode 0 is by convention the shared bus mode.
using FockState = std::vector<int>;

/// Ordered enumeration of every occupation vector of `mode_count` modes with
/// a fixed total photon number, plus the inverse index.  Ordering is
/// lexicographically descending on the occupation digits, so the all-in-bus
/// state comes first and the all-in-last-mode state comes last; the order is
/// deterministic across runs and platforms.
struct FockBasis {
  int mode_count = 0;
  int total_photons = 0;
  std::vector<FockState> states;
  std::map<FockState, int> index;

  int size() const { return static_cast<int>(states.size()); }

  /// Position of `state` in the enumeration; throws std::out_of_range if the
  /// state does not belong to this sector.
  int index_of(const FockState& state) const;
};

/// Build the fixed-photon-number sector.  The basis has exactly
/// C(mode_count + total_photons - 1, total_photons) states.
/// Throws std::invalid_argument for mode_count < 1 or total_photons < 0.
FockBasis enumerate_basis(int mode_count, int total_photons);

/// Apply the hopping operator a†_dest a_src to a basis state.  Returns the
/// resulting state together with the bosonic matrix element
/// sqrt(n_dest + 1) * sqrt(n_src), or nothing if the source mode is empty.
/// Throws std::invalid_argument for dest == src and std::out_of_range for
/// indices outside the state.
std::optional<std::pair<FockState, double>> apply_hopping(const FockState& state,
                                                          int dest, int src);

/// Digit-string label "n0 n1 ... n_{M-1}" with the bus digit first, e.g.
/// (0,1,1,0) -> "0110".  Throws std::invalid_argument if any occupation
/// exceeds 9 (never reached for the photon numbers used here).
std::string state_label(const FockState& state);

}  // namespace ctap
