#include "conlap/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace conlap {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json row_to_json(const LevelRow& row) {
  return {
      {"level", row.level},
      {"k_index", row.k_index},
      {"lambda_tilde", row.lambda_tilde},
      {"lambda_analytic", row.lambda_analytic},
      {"abs_err", row.abs_err},
      {"rel_err", row.rel_err},
      {"residual", row.residual},
      {"regime_eps_ok", row.regime_eps_ok},
      {"regime_lambda_ok", row.regime_lambda_ok},
  };
}

}  // namespace

std::string csv_header() {
  return "level,rho,eps,N,r,covering_radius,separation,k_index,lambda_tilde,"
         "lambda_analytic,abs_err,rel_err,residual,regime_eps_ok,"
         "regime_lambda_ok,wall_ms";
}

void write_rows_csv(std::ostream& os, const std::vector<LevelRow>& rows) {
  os << csv_header() << "\n";
  for (const LevelRow& row : rows) {
    os << row.level << ',' << fmt(row.rho) << ',' << fmt(row.eps) << ','
       << row.n_points << ',' << row.rank << ',' << fmt(row.covering_radius)
       << ',' << fmt(row.separation) << ',' << row.k_index << ','
       << fmt(row.lambda_tilde) << ',' << fmt(row.lambda_analytic) << ','
       << fmt(row.abs_err) << ',' << fmt(row.rel_err) << ','
       << fmt(row.residual) << ',' << (row.regime_eps_ok ? 1 : 0) << ','
       << (row.regime_lambda_ok ? 1 : 0) << ',' << fmt(row.wall_ms) << "\n";
  }
}

nlohmann::json manifold_to_json(const ManifoldModel& m) {
  nlohmann::json j;
  switch (m.kind()) {
    case ManifoldKind::Circle:
      j["kind"] = "circle";
      j["lengths"] = m.lengths();
      break;
    case ManifoldKind::FlatTorus:
      j["kind"] = "flat_torus";
      j["lengths"] = m.lengths();
      break;
    case ManifoldKind::Sphere2:
      j["kind"] = "sphere2";
      j["radius"] = m.radius();
      break;
  }
  return j;
}

nlohmann::json bundle_to_json(const BundleModel& b) {
  nlohmann::json j;
  switch (b.kind()) {
    case BundleKind::TrivialReal:
      j["kind"] = "trivial_real";
      break;
    case BundleKind::TrivialComplex:
      j["kind"] = "trivial_complex";
      break;
    case BundleKind::FlatU1Torus:
      j["kind"] = "flat_u1";
      j["holonomy"] = b.holonomy();
      break;
    case BundleKind::TangentSphere2:
      j["kind"] = "tangent_sphere2";
      break;
  }
  j["rank"] = b.rank();
  j["base"] = manifold_to_json(b.base());
  return j;
}

nlohmann::json report_to_json(const ExperimentConfig& cfg,
                              const ConvergenceReport& report) {
  nlohmann::json levels_cfg = nlohmann::json::array();
  for (const ScaleLevel& level : cfg.levels) {
    levels_cfg.push_back({{"rho", level.rho}, {"eps", level.eps}});
  }
  nlohmann::json config = {
      {"bundle", bundle_to_json(cfg.bundle)},
      {"k", cfg.k},
      {"levels", levels_cfg},
      {"net",
       cfg.net_kind == ExperimentConfig::NetKind::Fps ? "fps" : "grid"},
      {"seed", cfg.seed},
      {"tol", cfg.tol},
  };

  nlohmann::json levels = nlohmann::json::array();
  for (const LevelResult& level : report.levels) {
    nlohmann::json j = {
        {"level", level.level},
        {"rho", level.rho},
        {"eps", level.eps},
        {"failed", level.failed},
    };
    if (level.failed) {
      j["error"] = level.error;
    } else {
      j["n_points"] = level.n_points;
      j["rank"] = level.rank;
      j["covering_radius"] = level.covering_radius;
      j["separation"] = level.separation;
      j["lambda_bound"] = level.lambda_bound;
      j["essential_gap"] = level.essential_gap;
      j["wall_ms"] = level.wall_ms;
      j["method"] = level.spectrum.method;
      nlohmann::json rows = nlohmann::json::array();
      for (const LevelRow& row : level.rows) rows.push_back(row_to_json(row));
      j["rows"] = rows;
    }
    levels.push_back(std::move(j));
  }

  nlohmann::json orders = nlohmann::json::array();
  for (const std::vector<double>& pair : report.decay_orders) {
    nlohmann::json inner = nlohmann::json::array();
    for (double v : pair) inner.push_back(finite_or_null(v));
    orders.push_back(std::move(inner));
  }

  return {
      {"config", std::move(config)},
      {"levels", std::move(levels)},
      {"summary",
       {{"decay_orders", std::move(orders)},
        {"decay_monotone", report.decay_monotone}}},
  };
}

nlohmann::json lemma_report_to_json(const LemmaReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const LemmaCheck& check : report.checks) {
    checks.push_back({
        {"name", check.name},
        {"pass", check.pass},
        {"lhs", check.lhs},
        {"rhs", check.rhs},
        {"witness", check.witness},
    });
  }
  return {{"all_pass", report.all_pass}, {"checks", std::move(checks)}};
}

namespace {

bool type_matches(const std::string& type, const nlohmann::json& doc) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "null") return doc.is_null();
  if (type == "integer") return doc.is_number_integer();
  if (type == "number") return doc.is_number();
  return false;
}

bool fail(std::string* error, const std::string& path,
          const std::string& message) {
  if (error) *error = path + ": " + message;
  return false;
}

bool validate_node(const nlohmann::json& schema, const nlohmann::json& doc,
                   const std::string& path, std::string* error) {
  if (!schema.is_object()) {
    return fail(error, path, "schema node is not an object");
  }
  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_string()) {
      ok = type_matches(it->get<std::string>(), doc);
    } else if (it->is_array()) {
      for (const nlohmann::json& t : *it) {
        if (t.is_string() && type_matches(t.get<std::string>(), doc)) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) return fail(error, path, "type mismatch (" + it->dump() + ")");
  }
  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const nlohmann::json& candidate : *it) {
      if (candidate == doc) {
        ok = true;
        break;
      }
    }
    if (!ok) return fail(error, path, "value not in enum " + it->dump());
  }
  if (auto it = schema.find("minimum"); it != schema.end()) {
    if (doc.is_number() && doc.get<double>() < it->get<double>()) {
      return fail(error, path, "below minimum " + it->dump());
    }
  }
  if (auto it = schema.find("required"); it != schema.end()) {
    if (!doc.is_object()) {
      return fail(error, path, "required fields on a non-object");
    }
    for (const nlohmann::json& name : *it) {
      if (!doc.contains(name.get<std::string>())) {
        return fail(error, path,
                    "missing required field '" + name.get<std::string>() + "'");
      }
    }
  }
  if (auto it = schema.find("properties"); it != schema.end() && doc.is_object()) {
    for (auto prop = it->begin(); prop != it->end(); ++prop) {
      if (doc.contains(prop.key()) &&
          !validate_node(prop.value(), doc.at(prop.key()), path + "." + prop.key(),
                         error)) {
        return false;
      }
    }
  }
  if (auto it = schema.find("items"); it != schema.end() && doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!validate_node(*it, doc[i], path + "[" + std::to_string(i) + "]",
                         error)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool validate_json_subset(const nlohmann::json& schema,
                          const nlohmann::json& doc, std::string* error) {
  return validate_node(schema, doc, "$", error);
}

}  // namespace conlap
