#include "collarext/errors.hpp"
#include "collarext/obstructions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace collarext {

namespace {

std::string encode(const Element& e) {
  std::string out;
  out.reserve(e.size() + 1);
  for (std::int64_t v : e) {
    auto z = (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
    while (z >= 0x80) {
      out.push_back(static_cast<char>((z & 0x7f) | 0x80));
      z >>= 7;
    }
    out.push_back(static_cast<char>(z));
  }
  return out;
}

Element decode(const std::string& s) {
  Element e;
  std::uint64_t z = 0;
  int shift = 0;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    z |= static_cast<std::uint64_t>(c & 0x7f) << shift;
    if (c & 0x80) {
      shift += 7;
      continue;
    }
    e.push_back(static_cast<std::int64_t>(z >> 1) ^ -static_cast<std::int64_t>(z & 1));
    z = 0;
    shift = 0;
  }
  return e;
}

bool contains(const std::vector<std::string>& sorted, const std::string& key) {
  return std::binary_search(sorted.begin(), sorted.end(), key);
}

struct LineFit {
  double slope = 0.0;
  double slope_se = 0.0;
  double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + f.slope * (x[i] - mx));
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  f.slope_se = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace

GrowthData ball_count(const GroupModel& g, int R_max, std::uint64_t budget) {
  if (R_max < 0) throw UsageError("ball_count: R_max must be >= 0");
  GrowthData d;
  d.group = g.name();
  d.generators = g.generators();
  d.counts.push_back(1);
  std::vector<std::string> prev, cur{encode(g.identity())};
  const auto gens = static_cast<std::uint64_t>(g.generator_count());
  for (int r = 1; r <= R_max; ++r) {
    if (prev.size() + cur.size() + cur.size() * gens > budget) {
      d.partial = true;
      break;
    }
    std::vector<std::string> next;
    next.reserve(cur.size() * gens);
    for (const auto& key : cur) {
      const Element e = decode(key);
      for (int s = 0; s < g.generator_count(); ++s) {
        std::string cand = encode(g.times_generator(e, s));
        if (!contains(cur, cand) && !contains(prev, cand)) next.push_back(std::move(cand));
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    d.counts.push_back(d.counts.back() + next.size());
    prev = std::move(cur);
    cur = std::move(next);
  }
  return d;
}

std::vector<std::uint64_t> sphere_sizes(const GrowthData& d) {
  std::vector<std::uint64_t> s;
  for (std::size_t r = 0; r < d.counts.size(); ++r) s.push_back(d.counts[r] - (r ? d.counts[r - 1] : 0));
  return s;
}

GrowthOrderFit growth_order_fit(const GrowthData& d) {
  if (d.counts.size() < 6) throw UsageError("growth_order_fit: need at least 6 counts");
  const int R_max = static_cast<int>(d.counts.size()) - 1;
  std::vector<double> logR, R, logN;
  for (int r = std::max(1, (R_max + 1) / 2); r <= R_max; ++r) {
    logR.push_back(std::log(static_cast<double>(r)));
    R.push_back(static_cast<double>(r));
    logN.push_back(std::log(static_cast<double>(d.counts[static_cast<std::size_t>(r)])));
  }
  const LineFit loglog = fit_line(logR, logN);
  const LineFit loglin = fit_line(R, logN);
  GrowthOrderFit f;
  f.degree = loglog.slope;
  f.width = 2.0 * loglog.slope_se;
  f.loglog_residual = loglog.rms;
  f.loglinear_residual = loglin.rms;
  f.superpolynomial = loglin.rms < loglog.rms;
  return f;
}

EntropyEstimate entropy_estimate(const GrowthData& d) {
  if (d.counts.size() < 4) throw UsageError("entropy_estimate: need at least 4 counts");
  EntropyEstimate e;
  for (std::size_t r = 1; r < d.counts.size(); ++r) {
    e.sequence.push_back(std::log(static_cast<double>(d.counts[r])) / static_cast<double>(r));
  }
  e.value = e.sequence.back();
  return e;
}

SvarcMilnorReport svarc_milnor_check(const GrowthData& d, const std::vector<double>& volumes,
                                     double alpha, double beta) {
  if (volumes.empty()) throw UsageError("svarc_milnor_check: empty volume list");
  if (volumes.size() != d.counts.size()) {
    throw UsageError("svarc_milnor_check: one volume per radius required");
  }
  if (!(alpha > 0.0) || !(beta > 0.0)) throw UsageError("svarc_milnor_check: alpha, beta must be positive");
  SvarcMilnorReport rep;
  for (std::size_t r = 0; r < volumes.size(); ++r) {
    const bool ok = static_cast<double>(d.counts[r]) <= alpha * volumes[r];
    rep.holds.push_back(ok);
    if (!ok) rep.failing_radii.push_back(static_cast<int>(r));
  }
  return rep;
}

}  // namespace collarext
