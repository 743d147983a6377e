#pragma once

#include <cmath>

namespace droneplace {

// The only dB <-> linear conversion pair in the library. Every power,
// gain, and SINR conversion routes through these two functions.
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double db_from_linear(double lin) { return 10.0 * std::log10(lin); }

// dBm carries the same decibel scale; mW is its linear unit.
inline double mw_from_dbm(double dbm) { return linear_from_db(dbm); }
inline double dbm_from_mw(double mw) { return db_from_linear(mw); }

inline double log2p1(double x) { return std::log2(1.0 + x); }

constexpr double kPi = 3.14159265358979323846;

inline double deg_from_rad(double rad) { return rad * 180.0 / kPi; }
inline double rad_from_deg(double deg) { return deg * kPi / 180.0; }

}  // namespace droneplace
