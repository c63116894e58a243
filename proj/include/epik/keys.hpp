#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "epik/engel.hpp"
#include "epik/laurent.hpp"

namespace epik {

// sk = the chain length n; the entire secret.
struct SecretKey {
  uint8_t preset_id;
  uint32_t n;
};

// pk = Engel digits of the published 2-torsion x-series (already truncated
// to d coefficients and one base-p digit per coefficient) plus the curve's
// j-invariant series.
struct PublicKey {
  uint8_t preset_id;
  std::vector<EngelDigit> digits;
  LaurentSeries j_n;
};

// ct = the ephemeral codomain E^(r) as published series plus an optional
// masked payload (empty in plain KEM mode).
struct Ciphertext {
  uint8_t preset_id;
  LaurentSeries A_r;
  LaurentSeries B_r;
  std::vector<uint8_t> payload;
};

using SharedKey = std::array<uint8_t, 32>;

}  // namespace epik
