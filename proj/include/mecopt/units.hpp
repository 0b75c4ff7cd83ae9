#pragma once

// Conversions between the convenience units used in configuration files and
// the SI units used everywhere else. 1 KB is 8000 bits (decimal).

namespace mecopt::units {

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

constexpr double mhz_to_hz(double mhz) { return mhz * 1e6; }
constexpr double hz_to_mhz(double hz) { return hz / 1e6; }
constexpr double ghz_to_hz(double ghz) { return ghz * 1e9; }
constexpr double hz_to_ghz(double hz) { return hz / 1e9; }
constexpr double gbps_to_bps(double gbps) { return gbps * 1e9; }
constexpr double bps_to_gbps(double bps) { return bps / 1e9; }
constexpr double kb_to_bits(double kb) { return kb * 8000.0; }
constexpr double bits_to_kb(double bits) { return bits / 8000.0; }
constexpr double mw_to_watt(double mw) { return mw * 1e-3; }
constexpr double watt_to_mw(double watt) { return watt * 1e3; }
// W/GHz of CPU power is numerically J per 1e9 cycles.
constexpr double watt_per_ghz_to_joule_per_cycle(double w_per_ghz) { return w_per_ghz * 1e-9; }
constexpr double joule_per_cycle_to_watt_per_ghz(double j) { return j * 1e9; }

} // namespace mecopt::units
