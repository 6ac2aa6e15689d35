#include "slinv/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "slinv/charfn.hpp"
#include "slinv/fundamental.hpp"
#include "slinv/inverse.hpp"
#include "slinv/problem_io.hpp"
#include "slinv/spectrum.hpp"

namespace slinv::cli {

namespace {

std::string fmt(double v, int digits) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

SpectrumOptions merge(SpectrumOptions base, const SolverFlags& flags) {
  if (flags.steps) base.steps = *flags.steps;
  if (flags.scan_points_per_pi) base.scan_points_per_pi = *flags.scan_points_per_pi;
  if (flags.root_tolerance) base.root_tolerance = *flags.root_tolerance;
  return base;
}

void write_file(const Path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError(path.string() + ": cannot open for writing");
  file << content;
  if (!file) throw InputError(path.string() + ": write failed");
}

void emit(const std::optional<Path>& path, const std::string& content, std::ostream& out) {
  if (path)
    write_file(*path, content);
  else
    out << content;
}

/// Maps library errors onto the exit-code contract.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NumericOverflowError& e) {
    err << "error: numeric overflow: " << e.what() << '\n';
    return kOverflow;
  } catch (const AuditError& e) {
    err << "error: " << e.what() << '\n';
    return kAuditFailure;
  } catch (const ConditioningError& e) {
    err << "error: " << e.what() << '\n';
    return kConditioning;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace

int cmd_forward(const Path& problem, double lambda, const SolverFlags& flags,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile file = read_problem(problem);
    const SpectrumOptions opts = merge(file.solver, flags);
    if (!std::isfinite(lambda)) throw InputError("--lambda: must be finite");
    const Propagator propagate(file.potential, opts.steps);
    const auto f = propagate(lambda);

    std::ostringstream os;
    os << "kind,lambda,y1,dy1,y2,dy2,delta\n";
    for (auto kind : {ProblemKind::FullL, ProblemKind::DecomposedL1, ProblemKind::DecomposedL2}) {
      const double delta = characteristic_determinant(file.spec(kind), f);
      if (!std::isfinite(delta))
        throw NumericOverflowError("characteristic determinant is not finite", lambda);
      os << to_string(kind) << ',' << fmt(lambda, 12) << ',' << fmt(f.y1, 12) << ','
         << fmt(f.dy1, 12) << ',' << fmt(f.y2, 12) << ',' << fmt(f.dy2, 12) << ','
         << fmt(delta, 12) << '\n';
    }
    out << os.str();
    return int{kOk};
  });
}

int cmd_spectrum(const Path& problem, ProblemKind kind, int count,
                 const std::optional<Path>& out_path, const SolverFlags& flags,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (count < 1) throw InputError("--count: must be at least 1");
    const ProblemFile file = read_problem(problem);
    const SpectrumOptions opts = merge(file.solver, flags);
    try {
      const Spectrum sp = enumerate_eigenvalues(file.spec(kind), count, opts);
      emit(out_path, format_spectrum_csv(sp), out);
      if (!sp.complete()) {
        err << "error: audit: " << describe_audit(sp) << '\n';
        return int{kAuditFailure};
      }
      return int{kOk};
    } catch (const AuditError& e) {
      emit(out_path, format_spectrum_csv(e.partial()), out);
      err << "error: " << e.what() << '\n';
      return int{kAuditFailure};
    }
  });
}

int cmd_invert(const Path& spectrum_l, const Path& spectrum_l1, const Path& spectrum_l2,
               int basis_size, const Path& out_path, const SolverFlags& flags,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (basis_size < 0) throw InputError("--basis-size: must be non-negative");
    ReconstructionTarget target{read_spectrum_csv(spectrum_l, ProblemKind::FullL),
                                read_spectrum_csv(spectrum_l1, ProblemKind::DecomposedL1),
                                read_spectrum_csv(spectrum_l2, ProblemKind::DecomposedL2)};
    const std::size_t n = target.spectrum_l.count();
    if (target.spectrum_l1.count() != n || target.spectrum_l2.count() != n)
      throw InputError("spectrum files have different row counts (" + std::to_string(n) + ", " +
                       std::to_string(target.spectrum_l1.count()) + ", " +
                       std::to_string(target.spectrum_l2.count()) + ")");
    if (n < static_cast<std::size_t>(basis_size) + 3)
      throw InputError("need at least basis_size + 3 = " + std::to_string(basis_size + 3) +
                       " eigenvalues per spectrum, got " + std::to_string(n));
    const std::pair<const Path*, const Spectrum*> inputs[] = {
        {&spectrum_l, &target.spectrum_l},
        {&spectrum_l1, &target.spectrum_l1},
        {&spectrum_l2, &target.spectrum_l2}};
    for (const auto& [path, sp] : inputs)
      if (!sp->complete())
        throw InputError(path->string() + ": spectrum is marked incomplete by its audit");

    InverseOptions opts;
    opts.spectrum = merge(opts.spectrum, flags);

    ReconstructionResult result;
    try {
      result = reconstruct(target, basis_size, opts);
    } catch (const ContractError&) {
      throw;
    } catch (const NumericOverflowError&) {
      throw;
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      err << "error: reconstruction failed: " << e.what() << '\n';
      return int{kNotConverged};
    }

    std::ostringstream report;
    report << "misfit: " << fmt(result.misfit, 17) << '\n';
    report << "iterations: " << result.iterations << '\n';
    report << "converged: " << (result.converged ? "true" : "false") << '\n';
    report << "degenerate: " << (result.degenerate ? "true" : "false") << '\n';
    for (const auto& w : result.warnings) report << "warning: " << w << '\n';
    out << report.str();

    if (result.degenerate) {
      err << "error: " << kDegeneracyWarning << '\n';
      return int{kDegenerate};
    }
    ProblemFile recovered{result.potential_hat, result.boundary_hat, opts.spectrum};
    write_file(out_path, format_problem(recovered));
    return int{result.converged ? kOk : kNotConverged};
  });
}

int cmd_decompose(const Path& problem, double s_min, std::optional<double> s_max, int samples,
                  const std::optional<Path>& out_path, const SolverFlags& flags,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile file = read_problem(problem);
    const double hi = s_max.value_or(s_min + 10.0 * std::numbers::pi);
    const int steps = flags.steps.value_or(kDefaultDecomposeSteps);
    if (samples < static_cast<int>(kMinBasisSamples))
      throw InputError("--samples: need at least " + std::to_string(kMinBasisSamples));
    if (!(s_min >= kMinBasisFrequency)) throw InputError("--s-min: must be at least 20");
    if (!(hi > s_min)) throw InputError("--s-max: must exceed --s-min");

    const ProblemSpec spec = file.spec(ProblemKind::FullL);
    const auto c = basis_decompose(sample_full_determinant(spec, s_min, hi, samples, steps));
    const double u1 = u_accumulated(file.potential, 1.0);
    const auto pred = predicted_basis_coefficients(file.boundary, u1);

    std::ostringstream os;
    auto kv = [&](const char* key, double v) { os << key << " = " << fmt(v, 17) << '\n'; };
    kv("s_min", s_min);
    kv("s_max", hi);
    os << "samples = " << samples << '\n';
    os << "steps = " << steps << '\n';
    kv("c_const", c.c_const);
    kv("c_cos", c.c_cos);
    kv("c_sin", c.c_sin);
    kv("c_s_sin", c.c_s_sin);
    kv("c_cos2", c.c_cos2);
    kv("residual_norm", c.residual_norm);
    kv("u1", u1);
    kv("predicted_c_const", pred.c_const);
    kv("predicted_c_cos", pred.c_cos);
    kv("predicted_c_s_sin", pred.c_s_sin);
    kv("discrepancy_c_const", std::abs(c.c_const - pred.c_const));
    kv("discrepancy_c_cos", std::abs(c.c_cos - pred.c_cos));
    kv("discrepancy_c_s_sin", std::abs(c.c_s_sin - pred.c_s_sin));
    kv("discrepancy_c_cos2", std::abs(c.c_cos2));
    emit(out_path, os.str(), out);
    return int{kOk};
  });
}

}  // namespace slinv::cli
