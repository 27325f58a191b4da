#include "fastlim/state.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace fastlim {

std::string run_fingerprint(const ModelParams& params, const TransitionPair& pair,
                            const Grid1D& grid, double dt, const std::string& scheme) {
  std::ostringstream os;
  os.precision(17);
  os << params.d_R1 << ';' << params.d_R2 << ';' << params.d_S << ';' << params.gamma1 << ';'
     << params.gamma2 << ';' << params.eta1 << ';' << params.eta2 << ';' << params.mu << ';'
     << params.rho << ';' << params.R_hat << ';' << params.epsilon << '|' << describe(pair) << '|'
     << grid.length() << ';' << grid.size() << '|' << dt << '|' << scheme;
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : os.str()) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::vector<double> uniform_times(double T, int intervals) {
  if (intervals <= 0 || T == 0.0) return {0.0};
  std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) times[k] = T * static_cast<double>(k) / intervals;
  times.back() = T;
  return times;
}

}  // namespace fastlim
