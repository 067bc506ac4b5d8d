#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <thread>

#include "whf/cli.hpp"

namespace whf::cli {

namespace {

// Step of the nested differences used for the field residual column.
constexpr double kFieldStep = 1e-3;

int worker_count(int requested, size_t tasks) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<size_t>(static_cast<size_t>(n), std::max<size_t>(tasks, 1)));
}

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  const int w = worker_count(workers, n);
  if (w == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool write_text(const std::string& path, const std::string& text, std::ostream& log) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    log << "cannot write " << path << "\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

struct Row {
  double rho = 0.0, v = 0.0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double B = std::numeric_limits<double>::quiet_NaN();
  double psi = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

void flag(Row& row, const Error& e) {
  if (row.status == "ok") row.status = std::string(to_string(e.kind()));
}

FieldIntegrator calibrated_integrator(const RunConfig& cfg) {
  FieldIntegrator fi(cfg.spec, cfg.fd_step, kQuadStep, cfg.margin);
  if (cfg.spec.family == Family::custom) fi.calibrate(cfg.reference_point());
  else fi.calibrate();
  return fi;
}

std::vector<Row> compute_rows(const RunConfig& cfg, int workers) {
  const auto pts = cfg.grid.points();
  std::vector<Row> rows(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) std::tie(rows[i].rho, rows[i].v) = pts[i];

  parallel_for(rows.size(), workers, [&](size_t i) {
    Row& r = rows[i];
    try {
      r.delta = metric_delta(axis_at(cfg.spec, r.rho, r.v, cfg.margin));
    } catch (const Error& e) {
      flag(r, e);
    }
    try {
      r.residual = field_residual(cfg.spec, r.rho, r.v, kFieldStep, cfg.margin);
    } catch (const Error& e) {
      flag(r, e);
    }
  });

  // B and psi: the calibration line v = v_cal is integrated once, then each
  // rho column continues from its own copy of the cache.
  std::optional<FieldIntegrator> base;
  std::optional<Error> cal_error;
  try {
    base.emplace(calibrated_integrator(cfg));
  } catch (const Error& e) {
    cal_error = e;
  }
  if (!base) {
    for (auto& r : rows) flag(r, *cal_error);
    return rows;
  }
  const double v_cal = base->calibration().v;
  const int nv = cfg.grid.v_n;
  const int nr = cfg.grid.rho_n;
  std::vector<std::optional<Error>> line_error(static_cast<size_t>(nr));
  for (int i = 0; i < nr; ++i) {
    try {
      base->at(rows[static_cast<size_t>(i * nv)].rho, v_cal);
    } catch (const Error& e) {
      line_error[static_cast<size_t>(i)] = e;
    }
  }
  parallel_for(static_cast<size_t>(nr), workers, [&](size_t i) {
    FieldIntegrator fi = *base;
    for (int j = 0; j < nv; ++j) {
      Row& r = rows[i * static_cast<size_t>(nv) + static_cast<size_t>(j)];
      if (line_error[i]) {
        flag(r, *line_error[i]);
        continue;
      }
      try {
        std::tie(r.B, r.psi) = fi.at(r.rho, r.v);
      } catch (const Error& e) {
        flag(r, e);
      }
    }
  });
  return rows;
}

struct Category {
  std::string name;
  double worst = 0.0;
  double tol = 0.0;
  bool seen = false;

  void add(double x) {
    seen = true;
    if (!(x <= worst)) worst = x;  // keeps NaN
  }
  bool pass() const { return !seen || worst <= tol; }
};

}  // namespace

std::string grid_table(const RunConfig& cfg, int workers, int* ok_rows) {
  const auto rows = compute_rows(cfg, workers > 0 ? workers : cfg.workers);
  std::string out = "rho,v,Delta,B,psi,field_residual,status\n";
  int ok = 0;
  for (const auto& r : rows) {
    out += fmt(r.rho) + ',' + fmt(r.v) + ',' + fmt(r.delta) + ',' + fmt(r.B) + ',' + fmt(r.psi) + ',' +
           fmt(r.residual) + ',' + r.status + '\n';
    if (r.status == "ok") ++ok;
  }
  if (ok_rows) *ok_rows = ok;
  return out;
}

int cmd_factorize(const RunConfig& cfg, const PointOverride& at, const std::string& out, std::ostream& log) {
  auto [rho, v] = cfg.reference_point();
  if (at.rho) rho = *at.rho;
  if (at.v) v = *at.v;
  const json rep = factorization_report(cfg, rho, v);
  const std::string path = out.empty() ? cfg.report_path : out;
  if (!write_text(path, rep.dump(2) + "\n", log)) return kExitInvariant;
  const int code = rep["exit_code"].get<int>();
  log << "factorize (" << fmt(rho) << ", " << fmt(v) << "): " << rep["status"].get<std::string>()
      << (code == kExitOk ? ", pass" : ", fail") << "\n";
  return code;
}

int cmd_grid(const RunConfig& cfg, const std::string& out, int workers, std::ostream& log) {
  int ok = 0;
  const std::string table = grid_table(cfg, workers, &ok);
  const std::string path = out.empty() ? cfg.table_path : out;
  if (!write_text(path, table, log)) return kExitInvariant;
  const int total = cfg.grid.rho_n * cfg.grid.v_n;
  log << "grid: " << ok << "/" << total << " rows ok\n";
  return ok >= 1 ? kExitOk : kExitInvariant;
}

int cmd_verify(const RunConfig& cfg, int workers, std::ostream& log) {
  const double tol = cfg.verify_tol;
  std::vector<Category> cats = {
      {"boundary", 0, tol},     {"x_at_zero", 0, tol},          {"determinant", 0, tol},
      {"symmetry", 0, tol},     {"propagation", 0, tol},        {"r2_cross", 0, 10 * tol},
      {"closed_columns", 0, 10 * tol}, {"Delta", 0, tol},       {"B", 0, cfg.quadrature_tol},
      {"exp_psi", 0, cfg.quadrature_tol}, {"field_residual", 0, cfg.quadrature_tol},
  };
  auto cat = [&](const std::string& n) -> Category& {
    return *std::find_if(cats.begin(), cats.end(), [&](const Category& c) { return c.name == n; });
  };

  const auto pts = cfg.grid.points();
  struct PointResult {
    std::map<std::string, double> values;
    std::optional<Error> error;
  };
  std::vector<PointResult> results(pts.size());
  const bool closed = cfg.spec.family != Family::custom;

  parallel_for(pts.size(), workers > 0 ? workers : cfg.workers, [&](size_t i) {
    const auto [rho, v] = pts[i];
    auto& res = results[i];
    try {
      const auto sp = branch_points(rho, v, cfg.spec.lambda, cfg.margin);
      const auto m = spectral_substitute(cfg.spec, sp);
      const Contour c = make_contour(cfg.spec.lambda);
      const auto f = factorize(m, c);
      const auto rep = assemble_and_verify(m, f, c, tol);
      res.values["boundary"] = rep.boundary;
      res.values["x_at_zero"] = rep.x_at_zero;
      res.values["determinant"] = rep.determinant;
      res.values["symmetry"] = rep.symmetry;
      res.values["propagation"] = rep.propagation;
      res.values["r2_cross"] = std::max(rep.r2_plus, rep.r2_minus);
      const double delta = metric_delta(axis_matrix(f));
      if (closed) {
        const auto cc = closed_form_columns(cfg.spec, sp);
        double dev = 0.0;
        for (const cplx z : sample(c, 128)) {
          dev = std::max(dev, (f.first.plus_at(z) - cc.first.plus_at(z)).cwiseAbs().maxCoeff());
          dev = std::max(dev, (f.first.minus_at(z) - cc.first.minus_at(z)).cwiseAbs().maxCoeff());
          dev = std::max(dev, (f.second.plus_at(z) - cc.second.plus_at(z)).cwiseAbs().maxCoeff());
          dev = std::max(dev, (f.second.minus_at(z) - cc.second.minus_at(z)).cwiseAbs().maxCoeff());
        }
        res.values["closed_columns"] = dev;
        const auto fields = closed_form_fields(cfg.spec, rho, v);
        res.values["Delta"] = std::abs(delta - fields->delta);
      }
      res.values["field_residual"] = field_residual(cfg.spec, rho, v, kFieldStep, cfg.margin);
    } catch (const Error& e) {
      res.error = e;
    }
  });

  if (closed) {
    try {
      FieldIntegrator fi = calibrated_integrator(cfg);
      for (size_t i = 0; i < pts.size(); ++i) {
        if (results[i].error) continue;
        const auto [rho, v] = pts[i];
        const auto [B, psi] = fi.at(rho, v);
        const auto fields = closed_form_fields(cfg.spec, rho, v);
        results[i].values["B"] = std::abs(B - fields->B);
        results[i].values["exp_psi"] = std::abs(std::exp(psi) - fields->exp_psi);
      }
    } catch (const Error& e) {
      for (auto& r : results)
        if (!r.error) r.error = e;
    }
  }

  std::optional<Error> first_error;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (results[i].error) {
      log << "point (" << fmt(pts[i].first) << ", " << fmt(pts[i].second) << "): " << results[i].error->what() << "\n";
      if (!first_error) first_error = results[i].error;
      continue;
    }
    for (const auto& [k, x] : results[i].values) cat(k).add(x);
  }

  bool pass = true;
  for (const auto& c : cats) {
    if (!c.seen) continue;
    char line[160];
    std::snprintf(line, sizeof line, "%-16s worst %.3e  tol %.1e  %s\n", c.name.c_str(), c.worst, c.tol,
                  c.pass() ? "PASS" : "FAIL");
    log << line;
    pass = pass && c.pass();
  }
  if (first_error) {
    log << "error: " << to_string(first_error->kind()) << "\n";
    return exit_code(first_error->kind());
  }
  log << (pass ? "verify: PASS\n" : "verify: FAIL\n");
  return pass ? kExitOk : kExitInvariant;
}

}  // namespace whf::cli
