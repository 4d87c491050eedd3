#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fockskin/annihilation_topology.hpp"
#include "fockskin/dynamics.hpp"
#include "fockskin/errors.hpp"
#include "fockskin/spectral_topology.hpp"

namespace fockskin::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("trailing characters in " + what + " '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse " + what + " from '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument("trailing characters in " + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Table spectrum_table(const std::vector<Complex>& values) {
  Table t{{"index", "re", "im"}, {}};
  std::int64_t k = 0;
  for (const auto& z : values) t.add({k++, z.real(), z.imag()});
  return t;
}

InitialState parse_initial(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidArgument("--initial expects kind=value, got '" + text + "'");
  const std::string kind = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  if (kind == "sibc") return init::Sibc{parse_complex(value)};
  if (kind == "obc") return init::ObcLevel{parse_int(value, "OBC level")};
  if (kind == "delta") return init::Delta{parse_int(value, "delta site")};
  if (kind == "random") {
    const auto parts = split(value, ',');
    if (parts.empty() || parts.size() > 2) throw InvalidArgument("random expects <seed>[,<support>]");
    init::Random r;
    r.seed = std::stoull(parts[0]);
    if (parts.size() == 2) r.support = parse_int(parts[1], "random support");
    return r;
  }
  throw InvalidArgument("unknown initial state kind '" + kind + "'");
}

}  // namespace

BoundaryCondition parse_bc(const std::string& text) {
  if (text == "obc") return Obc{};
  if (text == "pbc") return Pbc{};
  if (text.rfind("tbc=", 0) == 0) return Tbc{parse_double(text.substr(4), "twist angle")};
  throw InvalidArgument("boundary must be obc, pbc or tbc=<theta>, got '" + text + "'");
}

Complex parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidArgument("expected <re>,<im>, got '" + text + "'");
  return {parse_double(parts[0], "real part"), parse_double(parts[1], "imaginary part")};
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_int(p, "integer list entry"));
  if (out.empty()) throw InvalidArgument("empty integer list");
  return out;
}

CommandResult cmd_spectra(const SpectraArgs& a) {
  const ChainSpec spec{a.params, a.nu, a.dim, parse_bc(a.bc)};
  spec.validate();
  CommandResult r;
  if (a.method == "analytic") {
    if (!is_open(spec.bc)) throw InvalidArgument("--method analytic is only available for obc");
    r.data = spectrum_table(obc_spectrum_analytic(spec).values);
  } else if (a.method == "numeric") {
    const auto s = is_open(spec.bc) ? obc_spectrum_numeric(spec) : pbc_spectrum_numeric(spec);
    r.data = spectrum_table(s.values);
  } else {
    throw InvalidArgument("--method must be numeric or analytic");
  }
  r.diagnostics["eigenvalues"] = r.data.rows.size();
  return r;
}

CommandResult cmd_winding_map(const WindingMapArgs& a) {
  a.params.validate();
  if (a.nx < 2 || a.ny < 2) throw InvalidArgument("--nx and --ny must be at least 2");
  if (a.band < 0.0) throw InvalidArgument("--band must be non-negative");

  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
  if (!(a.re_min && a.re_max && a.im_min && a.im_max)) {
    // Default window: the traced loop's bounding box, padded by 10% on every side.
    const auto loop = loop_trace(a.params, a.nu, a.dim, 256);
    re_min = im_min = INFINITY;
    re_max = im_max = -INFINITY;
    for (const auto& p : loop.points) {
      if (!p) continue;
      re_min = std::min(re_min, p->real());
      re_max = std::max(re_max, p->real());
      im_min = std::min(im_min, p->imag());
      im_max = std::max(im_max, p->imag());
    }
    const double pad_re = 0.1 * (re_max - re_min), pad_im = 0.1 * (im_max - im_min);
    re_min -= pad_re;
    re_max += pad_re;
    im_min -= pad_im;
    im_max += pad_im;
  }
  if (a.re_min) re_min = *a.re_min;
  if (a.re_max) re_max = *a.re_max;
  if (a.im_min) im_min = *a.im_min;
  if (a.im_max) im_max = *a.im_max;
  if (!(re_max > re_min && im_max > im_min)) throw InvalidArgument("empty winding-map window");

  CommandResult r;
  r.data.columns = {"re", "im", "w", "log_abs_R"};
  std::int64_t band_cells = 0, ambiguous = 0, violations = 0, interior = 0;
  for (int iy = 0; iy < a.ny; ++iy) {
    const double im = im_min + (im_max - im_min) * iy / (a.ny - 1);
    for (int ix = 0; ix < a.nx; ++ix) {
      const double re = re_min + (re_max - re_min) * ix / (a.nx - 1);
      const Complex omega{re, im};
      const LogComplex rr = r_product(a.params, a.nu, a.dim, omega);
      const double log_abs = rr.zero ? -INFINITY : rr.log_mag;
      const bool in_band = std::abs(log_abs) < a.band;
      Cell w = kNaN;
      try {
        const auto res = winding_number(a.params, a.nu, a.dim, omega, a.n_theta, in_band ? 0.0 : a.band);
        w = static_cast<std::int64_t>(res.w);
        if (!in_band && (res.w == -1) != (log_abs < 0.0)) ++violations;
        if (res.w == -1) ++interior;
      } catch (const Error&) {
        ++ambiguous;
      }
      if (in_band) ++band_cells;
      r.data.add({re, im, w, log_abs});
    }
  }
  const auto cells = static_cast<std::int64_t>(a.nx) * a.ny;
  r.diagnostics["window"] = {{"re_min", re_min}, {"re_max", re_max}, {"im_min", im_min}, {"im_max", im_max}};
  r.diagnostics["cells"] = cells;
  r.diagnostics["band_cells"] = band_cells;
  r.diagnostics["ambiguous_cells"] = ambiguous;
  r.diagnostics["interior_cells"] = interior;
  r.diagnostics["consistency_violations"] = violations;
  if (violations > 0 || 100 * ambiguous >= cells) r.status = 3;
  return r;
}

CommandResult cmd_evolve(const EvolveArgs& a) {
  const ChainSpec spec{a.params, a.nu, a.trunc, Obc{}};
  spec.validate();
  EvolveOptions opt;
  opt.cross_check = a.cross_check;
  const auto trace = evolve(spec, parse_initial(a.initial), a.t_max, a.dt_out, opt);

  CommandResult r;
  r.data.columns = {"t", "edge_avg_re", "edge_avg_im", "N", "trace_re", "trace_im", "tail_mass"};
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    r.data.add({trace.times[k], trace.edge_avg[k].real(), trace.edge_avg[k].imag(),
                trace.particle_number[k].real(), trace.trace_sum[k].real(), trace.trace_sum[k].imag(),
                trace.tail_mass[k]});
  if (a.want_frames) {
    Table f{{"t", "j", "re", "im"}, {}};
    for (std::size_t k = 0; k < trace.times.size(); ++k)
      for (Eigen::Index j = 0; j < trace.frames[k].size(); ++j)
        f.add({trace.times[k], static_cast<std::int64_t>(j), trace.frames[k](j).real(),
               trace.frames[k](j).imag()});
    r.frames = std::move(f);
  }
  r.diagnostics["trusted_until"] = trace.trusted_until;
  r.diagnostics["cross_check_error"] = trace.cross_check_error;
  try {
    r.diagnostics["edge_growth_rate"] = growth_rate_fit(trace, 0.0, trace.trusted_until);
  } catch (const NumericalFailure&) {
    r.diagnostics["edge_growth_rate"] = nullptr;
  }
  return r;
}

CommandResult cmd_scaling(const ScalingArgs& a) {
  a.params.validate();
  const auto dims = parse_int_list(a.dims);
  const Complex ikappa{0.0, a.params.kappa};
  CommandResult r;
  r.data.columns = {"D", "max_im", "nearest_ikappa", "loop_radius"};
  for (int d : dims) {
    const auto s = pbc_spectrum_numeric({a.params, a.nu, d, Pbc{}});
    double max_im = -INFINITY, nearest = INFINITY;
    for (const auto& z : s.values) {
      max_im = std::max(max_im, z.imag());
      nearest = std::min(nearest, std::abs(z - ikappa));
    }
    const auto loop = loop_trace(a.params, a.nu, d, a.n_angles);
    if (loop.gaps() > 0) throw NumericalFailure("loop trace has unresolved angles at D=" + std::to_string(d));
    r.data.add({static_cast<std::int64_t>(d), max_im, a.nu == 0 ? nearest : kNaN, loop.radius()});
  }
  return r;
}

CommandResult cmd_annihilate(const AnnihilateArgs& a) {
  CommandResult r;
  if (a.mode == "spectrum") {
    const AnnihilationSpec spec{a.dim, parse_bc(a.bc), a.power};
    spec.validate();
    if (a.method == "analytic") {
      if (!std::holds_alternative<Pbc>(spec.bc) || a.power != 1)
        throw InvalidArgument("--method analytic needs --bc pbc and --power 1");
      r.data = spectrum_table(pbc_roots_analytic(a.dim).values);
    } else if (a.method == "numeric") {
      r.data = spectrum_table(annihilation_spectrum_numeric(spec).values);
    } else {
      throw InvalidArgument("--method must be numeric or analytic");
    }
    r.diagnostics["root_radius"] = pbc_root_radius(a.dim);
  } else if (a.mode == "winding") {
    const Complex omega = parse_complex(a.at);
    r.data.columns = {"power", "w", "inside"};
    for (int p : parse_int_list(a.powers)) {
      const auto res = winding_power(p, a.dim, omega, a.n_theta);
      r.data.add({static_cast<std::int64_t>(p), static_cast<std::int64_t>(res.w),
                  static_cast<std::int64_t>(res.magnitude_test ? 1 : 0)});
    }
    r.diagnostics["root_radius"] = pbc_root_radius(a.dim);
  } else if (a.mode == "coherent") {
    const auto c = coherent_mode(parse_complex(a.alpha), a.sites);
    r.data.columns = {"j", "re", "im", "abs"};
    for (Eigen::Index j = 0; j < c.mode.amplitudes.size(); ++j) {
      const Complex v = c.mode.amplitudes(j);
      r.data.add({static_cast<std::int64_t>(j), v.real(), v.imag(), std::abs(v)});
    }
    r.diagnostics["residual"] = c.residual;
    r.diagnostics["tail_bound"] = c.tail_bound;
  } else {
    throw InvalidArgument("--mode must be spectrum, winding or coherent");
  }
  return r;
}

}  // namespace fockskin::cli
