#include "qopdd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qopdd {

namespace {

double wrap_period(double x, double d) {
  double y = std::fmod(x, d);
  if (y < 0) y += d;
  return y;
}

std::string format_series(const std::vector<double>& c) {
  std::ostringstream os;
  os.precision(17);
  for (double v : c) os << v << ",";
  return os.str();
}

}  // namespace

GratingProfile GratingProfile::flat(double mean_height, double period) {
  GratingProfile p;
  p.mean_ = mean_height;
  p.eps_ = 0.0;
  p.d_ = period;
  p.flat_ = true;
  p.smooth_ = true;
  p.is_series_ = true;
  p.shape_ = [](double) { return 0.0; };
  p.dshape_ = [](double) { return 0.0; };
  p.d2shape_ = [](double) { return 0.0; };
  std::ostringstream os;
  os.precision(17);
  os << "flat|mean=" << mean_height << "|d=" << period;
  p.signature_ = os.str();
  return p;
}

GratingProfile GratingProfile::cosine_series(double mean_height, double roughness,
                                             std::vector<double> cos_coeffs,
                                             std::vector<double> sin_coeffs,
                                             double period) {
  if (period <= 0) throw config_error("profile period must be positive");
  GratingProfile p;
  p.mean_ = mean_height;
  p.eps_ = roughness;
  p.d_ = period;
  p.smooth_ = true;
  p.cosc_ = std::move(cos_coeffs);
  p.sinc_ = std::move(sin_coeffs);
  p.is_series_ = true;
  const bool trivial = roughness == 0.0 ||
                       (std::all_of(p.cosc_.begin(), p.cosc_.end(), [](double v) { return v == 0.0; }) &&
                        std::all_of(p.sinc_.begin(), p.sinc_.end(), [](double v) { return v == 0.0; }));
  p.flat_ = trivial;
  const double w = 2.0 * PI / period;
  auto cosc = p.cosc_;
  auto sinc = p.sinc_;
  p.shape_ = [cosc, sinc, w](double x) {
    double v = 0.0;
    for (size_t m = 0; m < cosc.size(); ++m) v += cosc[m] * std::cos(w * (m + 1) * x);
    for (size_t m = 0; m < sinc.size(); ++m) v += sinc[m] * std::sin(w * (m + 1) * x);
    return v;
  };
  p.dshape_ = [cosc, sinc, w](double x) {
    double v = 0.0;
    for (size_t m = 0; m < cosc.size(); ++m) v -= cosc[m] * w * (m + 1) * std::sin(w * (m + 1) * x);
    for (size_t m = 0; m < sinc.size(); ++m) v += sinc[m] * w * (m + 1) * std::cos(w * (m + 1) * x);
    return v;
  };
  p.d2shape_ = [cosc, sinc, w](double x) {
    double v = 0.0;
    for (size_t m = 0; m < cosc.size(); ++m) {
      const double wm = w * (m + 1);
      v -= cosc[m] * wm * wm * std::cos(wm * x);
    }
    for (size_t m = 0; m < sinc.size(); ++m) {
      const double wm = w * (m + 1);
      v -= sinc[m] * wm * wm * std::sin(wm * x);
    }
    return v;
  };
  std::ostringstream os;
  os.precision(17);
  os << "cos[" << format_series(p.cosc_) << "]sin[" << format_series(p.sinc_)
     << "]|eps=" << roughness << "|mean=" << mean_height << "|d=" << period;
  p.signature_ = os.str();
  return p;
}

GratingProfile GratingProfile::triangle(double mean_height, double roughness, double period) {
  GratingProfile p;
  p.mean_ = mean_height;
  p.eps_ = roughness;
  p.d_ = period;
  p.smooth_ = false;
  p.flat_ = roughness == 0.0;
  const double d = period;
  // Unit peak-to-trough triangle: -1/2 at x=0, +1/2 at x=d/2.
  p.shape_ = [d](double x) {
    const double y = wrap_period(x, d);
    return 0.5 - 2.0 * std::abs(y - 0.5 * d) / d;
  };
  p.dshape_ = [d](double x) {
    const double y = wrap_period(x, d);
    return (y < 0.5 * d) ? 2.0 / d : -2.0 / d;
  };
  p.d2shape_ = [](double) { return 0.0; };
  std::ostringstream os;
  os.precision(17);
  os << "triangle|eps=" << roughness << "|mean=" << mean_height << "|d=" << period;
  p.signature_ = os.str();
  return p;
}

GratingProfile GratingProfile::lamellar(double mean_height, double roughness, double period) {
  GratingProfile p;
  p.mean_ = mean_height;
  p.eps_ = roughness;
  p.d_ = period;
  p.smooth_ = false;
  p.flat_ = roughness == 0.0;
  const double d = period;
  const double w = d / 64.0;  // ramp half-width of the trapezoidal approximation
  // Unit-height trapezoid wave: low on the outer quarters, high in the middle.
  p.shape_ = [d, w](double x) {
    const double y = wrap_period(x, d);
    auto ramp = [w](double t) {  // -1/2 -> +1/2 over [-w, w]
      if (t <= -w) return -0.5;
      if (t >= w) return 0.5;
      return 0.5 * t / w;
    };
    if (y < 0.5 * d) return ramp(y - 0.25 * d);
    return -ramp(y - 0.75 * d) + 0.0;
  };
  p.dshape_ = [d, w](double x) {
    const double y = wrap_period(x, d);
    auto in_ramp = [w](double t) { return t > -w && t < w; };
    if (y < 0.5 * d) return in_ramp(y - 0.25 * d) ? 0.5 / w : 0.0;
    return in_ramp(y - 0.75 * d) ? -0.5 / w : 0.0;
  };
  p.d2shape_ = [](double) { return 0.0; };
  std::ostringstream os;
  os.precision(17);
  os << "lamellar|eps=" << roughness << "|mean=" << mean_height << "|d=" << period;
  p.signature_ = os.str();
  return p;
}

GratingProfile GratingProfile::from_closure(double mean_height, double roughness,
                                            std::function<double(double)> shape,
                                            std::function<double(double)> shape_deriv,
                                            std::function<double(double)> shape_second_deriv,
                                            bool smooth, double period, std::string tag) {
  GratingProfile p;
  p.mean_ = mean_height;
  p.eps_ = roughness;
  p.d_ = period;
  p.smooth_ = smooth;
  p.flat_ = roughness == 0.0;
  p.shape_ = std::move(shape);
  p.dshape_ = std::move(shape_deriv);
  p.d2shape_ = shape_second_deriv ? std::move(shape_second_deriv)
                                  : std::function<double(double)>([](double) { return 0.0; });
  std::ostringstream os;
  os.precision(17);
  os << "closure:" << tag << "|eps=" << roughness << "|mean=" << mean_height
     << "|d=" << period;
  p.signature_ = os.str();
  return p;
}

GratingProfile GratingProfile::shifted(double delta_mean) const {
  GratingProfile p = *this;
  p.mean_ += delta_mean;
  std::ostringstream os;
  os.precision(17);
  os << p.signature_ << "|shift=" << delta_mean;
  // Rebuild a canonical signature from the new mean instead of chaining.
  auto pos = p.signature_.find("|mean=");
  if (pos != std::string::npos) {
    auto end = p.signature_.find('|', pos + 1);
    std::ostringstream os2;
    os2.precision(17);
    os2 << p.signature_.substr(0, pos) << "|mean=" << p.mean_
        << p.signature_.substr(end == std::string::npos ? p.signature_.size() : end);
    p.signature_ = os2.str();
  } else {
    p.signature_ = os.str();
  }
  return p;
}

std::pair<double, double> GratingProfile::extrema() const {
  constexpr int kSamples = 4096;
  double lo = value(0.0), hi = lo;
  int ilo = 0, ihi = 0;
  for (int i = 1; i < kSamples; ++i) {
    const double x = d_ * i / kSamples;
    const double v = value(x);
    if (v < lo) { lo = v; ilo = i; }
    if (v > hi) { hi = v; ihi = i; }
  }
  auto refine = [&](int i0, bool maximize) {
    double a = d_ * (i0 - 1) / kSamples, b = d_ * (i0 + 1) / kSamples;
    for (int it = 0; it < 60; ++it) {
      const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      const double v1 = value(m1), v2 = value(m2);
      if ((v1 < v2) == maximize) a = m1; else b = m2;
    }
    return value(0.5 * (a + b));
  };
  lo = std::min(lo, refine(ilo, false));
  hi = std::max(hi, refine(ihi, true));
  return {lo, hi};
}

std::vector<Complex> GratingProfile::shape_fourier(int band) const {
  std::vector<Complex> c(2 * band + 1, Complex{0.0, 0.0});
  auto at = [&](int m) -> Complex& { return c[m + band]; };
  if (is_series_) {
    for (size_t m = 0; m < cosc_.size(); ++m) {
      const int mm = static_cast<int>(m) + 1;
      if (mm <= band) {
        at(mm) += 0.5 * cosc_[m];
        at(-mm) += 0.5 * cosc_[m];
      }
    }
    for (size_t m = 0; m < sinc_.size(); ++m) {
      const int mm = static_cast<int>(m) + 1;
      if (mm <= band) {
        at(mm) += Complex{0.0, -0.5} * sinc_[m];
        at(-mm) += Complex{0.0, 0.5} * sinc_[m];
      }
    }
    return c;
  }
  constexpr int kSamples = 4096;
  for (int m = -band; m <= band; ++m) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < kSamples; ++j) {
      const double x = d_ * j / kSamples;
      acc += shape_(x) * std::exp(Complex{0.0, -2.0 * PI * m * j / double(kSamples)});
    }
    at(m) = acc / double(kSamples);
  }
  return c;
}

Complex QuasiPeriodicity::incidence_beta(double k0) const {
  const double w = k0 * k0 - alpha * alpha;
  if (w >= 0.0) return {std::sqrt(w), 0.0};
  return {0.0, std::sqrt(-w)};
}

Eigen::Vector2d InterfaceGrid::normal(int m) const {
  if (orientation == NormalOrientation::down) return {fp[m], -1.0};
  return {-fp[m], 1.0};
}

InterfaceGrid build_grid(const GratingProfile& profile, int n, NormalOrientation orientation) {
  if (n < 16 || n % 2 != 0)
    throw config_error("grid node count must be even and at least 16, got " +
                       std::to_string(n));
  InterfaceGrid g;
  g.profile = profile;
  g.orientation = orientation;
  g.n = n;
  g.s.resize(n);
  g.f.resize(n);
  g.fp.resize(n);
  g.fpp.resize(n);
  g.jacobian.resize(n);
  const double d = profile.period();
  for (int m = 0; m < n; ++m) {
    const double x = d * m / n;
    g.s[m] = x;
    g.f[m] = profile.value(x);
    g.fp[m] = profile.deriv(x);
    g.fpp[m] = profile.second_deriv(x);
    g.jacobian[m] = std::sqrt(1.0 + g.fp[m] * g.fp[m]);
  }
  return g;
}

void LayerStack::check_shape() const {
  if (profiles.empty()) throw config_error("stack needs at least one interface");
  if (wavenumbers.size() != profiles.size() + 1)
    throw config_error("stack with " + std::to_string(profiles.size()) +
                       " interfaces needs " + std::to_string(profiles.size() + 1) +
                       " wavenumbers, got " + std::to_string(wavenumbers.size()));
  for (const auto& p : profiles)
    if (std::abs(p.period() - qp.period) > 1e-12 * qp.period)
      throw config_error("profile period differs from stack period");
  for (double k : wavenumbers)
    if (!(k > 0)) throw config_error("wavenumbers must be positive");
}

std::vector<double> LayerStack::default_strip_cuts(double margin) const {
  check_shape();
  const int ni = num_interfaces();
  std::vector<double> cuts(ni + 1);
  std::vector<std::pair<double, double>> ex(ni);
  for (int j = 0; j < ni; ++j) ex[j] = profiles[j].extrema();
  cuts[0] = ex[0].second + margin;
  cuts[ni] = ex[ni - 1].first - margin;
  for (int j = 1; j < ni; ++j) {
    const double hi = ex[j].second;      // max of interface j (below)
    const double lo = ex[j - 1].first;   // min of interface j-1 (above)
    if (hi >= lo)
      throw geometry_error("strip partition infeasible between interfaces " +
                           std::to_string(j - 1) + " and " + std::to_string(j));
    cuts[j] = 0.5 * (hi + lo);
  }
  return cuts;
}

StackDiagnostics validate_stack(const LayerStack& stack) {
  stack.check_shape();
  StackDiagnostics diag;
  const int ni = stack.num_interfaces();
  std::vector<std::pair<double, double>> ex(ni);
  for (int j = 0; j < ni; ++j) ex[j] = stack.profiles[j].extrema();

  for (int j = 0; j + 1 < ni; ++j) {
    if (ex[j].first <= ex[j + 1].second) {
      std::ostringstream os;
      os << "interfaces " << j << " and " << j + 1 << " overlap: min " << ex[j].first
         << " <= max " << ex[j + 1].second;
      diag.items.push_back({StackDiagnostics::Kind::overlapping_profiles, j, 0, os.str()});
    }
  }

  if (stack.strip_cuts) {
    const auto& c = *stack.strip_cuts;
    if (static_cast<int>(c.size()) != ni + 1) {
      diag.items.push_back({StackDiagnostics::Kind::infeasible_cut, -1, 0,
                            "strip cut count must be num_interfaces + 1"});
    } else {
      for (int j = 0; j + 1 < static_cast<int>(c.size()); ++j)
        if (c[j] <= c[j + 1])
          diag.items.push_back({StackDiagnostics::Kind::infeasible_cut, j, 0,
                                "strip cuts must be strictly decreasing"});
      // Interface j must fit strictly between cuts j and j+1.
      for (int j = 0; j < ni; ++j) {
        if (!(c[j] > ex[j].second)) {
          std::ostringstream os;
          os << "cut " << j << " at " << c[j] << " not above interface " << j
             << " max " << ex[j].second;
          diag.items.push_back({StackDiagnostics::Kind::infeasible_cut, j, 0, os.str()});
        }
        if (!(c[j + 1] < ex[j].first)) {
          std::ostringstream os;
          os << "cut " << j + 1 << " at " << c[j + 1] << " not below interface " << j
             << " min " << ex[j].first;
          diag.items.push_back({StackDiagnostics::Kind::infeasible_cut, j + 1, 0, os.str()});
        }
      }
    }
  }

  for (size_t j = 0; j < stack.wavenumbers.size(); ++j) {
    const double k = stack.wavenumbers[j];
    const double tol = stack.wood_tol_factor * k;
    const int rmax = static_cast<int>(std::ceil((k + std::abs(stack.qp.alpha)) *
                                                stack.qp.period / (2.0 * PI))) + 2;
    for (int r = -rmax; r <= rmax; ++r) {
      const double ar = stack.qp.alpha_r(r);
      const double b2 = k * k - ar * ar;
      if (std::sqrt(std::abs(b2)) <= tol) {
        std::ostringstream os;
        os << "wavenumber k_" << j << " = " << k << " is near a Wood frequency at mode r=" << r;
        diag.items.push_back({StackDiagnostics::Kind::near_wood, static_cast<int>(j), r, os.str()});
      }
    }
  }
  return diag;
}

}  // namespace qopdd
