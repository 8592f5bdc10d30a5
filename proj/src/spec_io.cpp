#include "scr1d/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scr1d/errors.hpp"

namespace scr1d {

namespace {

using json = nlohmann::ordered_json;

// cm^-3 -> m^-3, um -> m, cm^-3/um -> m^-4.
constexpr double kPerCm3 = 1e6;
constexpr double kUm = 1e-6;
constexpr double kPerCm3PerUm = 1e12;

double require_number(const json& obj, const char* ctx, const char* key) {
  if (!obj.contains(key)) {
    throw MalformedDocument(std::string(ctx) + ": missing field \"" + key +
                            "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw MalformedDocument(std::string(ctx) + ": field \"" + key +
                            "\" must be a number");
  }
  return v.get<double>();
}

const json& require_object(const json& obj, const char* ctx, const char* key) {
  if (!obj.contains(key)) {
    throw MalformedDocument(std::string(ctx) + ": missing object \"" + key +
                            "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_object()) {
    throw MalformedDocument(std::string(ctx) + ": \"" + key +
                            "\" must be an object");
  }
  return v;
}

JunctionDocument parse_json(const json& root) {
  if (!root.is_object()) {
    throw MalformedDocument("document: top level must be a JSON object");
  }

  JunctionDocument doc;

  const json& profile = require_object(root, "document", "profile");
  if (!profile.contains("type") || !profile.at("type").is_string()) {
    throw MalformedDocument("profile: missing string field \"type\"");
  }
  const std::string type = profile.at("type").get<std::string>();
  if (type == "abrupt") {
    doc.profile = AbruptDoc{require_number(profile, "profile", "N_A_cm3"),
                            require_number(profile, "profile", "N_D_cm3"),
                            require_number(profile, "profile", "x_j_um")};
  } else if (type == "linear") {
    doc.profile = LinearDoc{require_number(profile, "profile", "a_cm3_per_um"),
                            require_number(profile, "profile", "x_j_um")};
  } else if (type == "gaussian") {
    doc.profile = GaussianDoc{require_number(profile, "profile", "C0_cm3"),
                              require_number(profile, "profile", "L_um"),
                              require_number(profile, "profile", "N_B_cm3")};
  } else if (type == "tabulated") {
    if (!profile.contains("points") || !profile.at("points").is_array()) {
      throw MalformedDocument("profile: tabulated needs a \"points\" array");
    }
    TabulatedDoc tab;
    for (const json& p : profile.at("points")) {
      if (!p.is_object()) {
        throw MalformedDocument("profile: each table point must be an object");
      }
      tab.points.push_back({require_number(p, "point", "x_um"),
                            require_number(p, "point", "N_cm3")});
    }
    doc.profile = std::move(tab);
  } else {
    throw MalformedDocument("profile: unknown type \"" + type + "\"");
  }

  const json& material = require_object(root, "document", "material");
  doc.material = MaterialDoc{require_number(material, "material", "eps_r"),
                             require_number(material, "material", "T_K"),
                             require_number(material, "material", "n_i_cm3")};

  if (root.contains("v_bi_override_V")) {
    const json& v = root.at("v_bi_override_V");
    if (!v.is_number()) {
      throw MalformedDocument("document: \"v_bi_override_V\" must be a number");
    }
    doc.v_bi_override_v = v.get<double>();
  }
  return doc;
}

}  // namespace

JunctionDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedDocument(std::string("document: ") + e.what());
  }
  return parse_json(root);
}

JunctionDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MalformedDocument("cannot open \"" + path + "\"");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string emit_document(const JunctionDocument& doc) {
  json profile;
  if (const auto* a = std::get_if<AbruptDoc>(&doc.profile)) {
    profile["type"] = "abrupt";
    profile["N_A_cm3"] = a->n_a_cm3;
    profile["N_D_cm3"] = a->n_d_cm3;
    profile["x_j_um"] = a->x_j_um;
  } else if (const auto* l = std::get_if<LinearDoc>(&doc.profile)) {
    profile["type"] = "linear";
    profile["a_cm3_per_um"] = l->a_cm3_per_um;
    profile["x_j_um"] = l->x_j_um;
  } else if (const auto* g = std::get_if<GaussianDoc>(&doc.profile)) {
    profile["type"] = "gaussian";
    profile["C0_cm3"] = g->c0_cm3;
    profile["L_um"] = g->l_um;
    profile["N_B_cm3"] = g->n_b_cm3;
  } else {
    const auto& tab = std::get<TabulatedDoc>(doc.profile);
    profile["type"] = "tabulated";
    json pts = json::array();
    for (const auto& p : tab.points) {
      pts.push_back(json{{"x_um", p.x_um}, {"N_cm3", p.n_cm3}});
    }
    profile["points"] = std::move(pts);
  }

  json root;
  root["profile"] = std::move(profile);
  root["material"] = json{{"eps_r", doc.material.eps_r},
                          {"T_K", doc.material.t_k},
                          {"n_i_cm3", doc.material.n_i_cm3}};
  if (doc.v_bi_override_v) {
    root["v_bi_override_V"] = *doc.v_bi_override_v;
  }
  return root.dump(2) + "\n";
}

bool documents_equal(const JunctionDocument& a, const JunctionDocument& b) {
  if (a.v_bi_override_v != b.v_bi_override_v) return false;
  if (a.material.eps_r != b.material.eps_r ||
      a.material.t_k != b.material.t_k ||
      a.material.n_i_cm3 != b.material.n_i_cm3) {
    return false;
  }
  if (a.profile.index() != b.profile.index()) return false;
  if (const auto* x = std::get_if<AbruptDoc>(&a.profile)) {
    const auto& y = std::get<AbruptDoc>(b.profile);
    return x->n_a_cm3 == y.n_a_cm3 && x->n_d_cm3 == y.n_d_cm3 &&
           x->x_j_um == y.x_j_um;
  }
  if (const auto* x = std::get_if<LinearDoc>(&a.profile)) {
    const auto& y = std::get<LinearDoc>(b.profile);
    return x->a_cm3_per_um == y.a_cm3_per_um && x->x_j_um == y.x_j_um;
  }
  if (const auto* x = std::get_if<GaussianDoc>(&a.profile)) {
    const auto& y = std::get<GaussianDoc>(b.profile);
    return x->c0_cm3 == y.c0_cm3 && x->l_um == y.l_um &&
           x->n_b_cm3 == y.n_b_cm3;
  }
  const auto& x = std::get<TabulatedDoc>(a.profile);
  const auto& y = std::get<TabulatedDoc>(b.profile);
  if (x.points.size() != y.points.size()) return false;
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    if (x.points[i].x_um != y.points[i].x_um ||
        x.points[i].n_cm3 != y.points[i].n_cm3) {
      return false;
    }
  }
  return true;
}

JunctionSpec to_si(const JunctionDocument& doc) {
  DopingProfile profile = [&doc] {
    if (const auto* a = std::get_if<AbruptDoc>(&doc.profile)) {
      return DopingProfile(
          Abrupt{a->n_a_cm3 * kPerCm3, a->n_d_cm3 * kPerCm3, a->x_j_um * kUm});
    }
    if (const auto* l = std::get_if<LinearDoc>(&doc.profile)) {
      return DopingProfile(
          LinearGrade{l->a_cm3_per_um * kPerCm3PerUm, l->x_j_um * kUm});
    }
    if (const auto* g = std::get_if<GaussianDoc>(&doc.profile)) {
      return DopingProfile(GaussianDiffusion{
          g->c0_cm3 * kPerCm3, g->l_um * kUm, g->n_b_cm3 * kPerCm3});
    }
    const auto& tab = std::get<TabulatedDoc>(doc.profile);
    Tabulated t;
    t.x.reserve(tab.points.size());
    t.n.reserve(tab.points.size());
    for (const auto& p : tab.points) {
      t.x.push_back(p.x_um * kUm);
      t.n.push_back(p.n_cm3 * kPerCm3);
    }
    return DopingProfile(std::move(t));
  }();
  return JunctionSpec(std::move(profile), doc.material.eps_r, doc.material.t_k,
                      doc.material.n_i_cm3 * kPerCm3, doc.v_bi_override_v);
}

}  // namespace scr1d
