#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ballmaps/analysis.hpp"

using namespace ballmaps;

namespace {

enum Exit { kOk = 0, kInput = 2, kVerification = 3, kCapability = 4 };

struct Globals {
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  std::string output = "-";
  bool no_check = false;
  std::size_t samples = 1000;
  double sample_tol = 1e-9;
};

void emit(const Globals& g, Json doc) {
  doc["tolerances"] = to_json(g.tol);
  doc["seed"] = g.seed;
  const std::string text = doc.dump(2) + "\n";
  if (g.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output);
  if (!out) throw InputError("cannot write " + g.output);
  out << text;
}

// Wraps a produced map with its properness certificate and a sphere sample.
int emit_map(const Globals& g, const RationalMap& f, Json extra = Json::object()) {
  Json doc = std::move(extra);
  doc["map"] = to_json(f);
  bool ok = true;
  if (!g.no_check) {
    const auto cert = is_proper(f, g.tol);
    const auto sample = sphere_sample_check(f, g.samples, g.sample_tol, g.seed);
    doc["verification"] = {{"proper", cert.proper},
                           {"residual", cert.residual},
                           {"threshold", cert.threshold},
                           {"sample", to_json(sample)}};
    ok = cert.proper && sample.pass;
  }
  emit(g, doc);
  return ok ? kOk : kVerification;
}

RationalMap load_map(const std::string& path) { return map_from_json(read_json_file(path)); }

std::vector<std::size_t> parse_coords(const std::vector<std::size_t>& one_based, std::size_t ambient) {
  std::vector<std::size_t> out;
  for (auto c : one_based) {
    if (c == 0 || c > ambient) throw InputError("coordinate index out of range");
    out.push_back(c - 1);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proper rational maps between balls: forms, invariant groups, realization"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-eq", g.tol.eq, "Relative coefficient equality tolerance")->capture_default_str();
  app.add_option("--tol-div", g.tol.div, "Sphere-division remainder tolerance")->capture_default_str();
  app.add_option("--tol-sig", g.tol.sig, "Eigenvalue zero threshold")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for sphere sampling")->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file, - for stdout")->capture_default_str();
  app.add_flag("--no-check", g.no_check, "Skip verification of produced maps");
  app.add_option("--samples", g.samples, "Sphere samples used in verification")->capture_default_str();
  app.add_option("--sample-tol", g.sample_tol, "Sphere sample tolerance")->capture_default_str();

  std::function<int()> action;

  auto* analyze_cmd = app.add_subcommand("analyze", "Full analysis of a map");
  std::string map_path;
  bool require_proper = false, strict_perms = false;
  analyze_cmd->add_option("map", map_path, "Map JSON file (- for stdin)")->required();
  analyze_cmd->add_flag("--require-proper", require_proper, "Exit 3 if the map is not proper");
  analyze_cmd->add_flag("--strict-permutations", strict_perms, "Exit 4 instead of skipping permutations for n > 8");
  analyze_cmd->callback([&] {
    action = [&] {
      const auto bundle = analyze(load_map(map_path), g.tol, strict_perms);
      emit(g, {{"analysis", to_json(bundle)}});
      return require_proper && !bundle.proper.proper ? kVerification : kOk;
    };
  });

  auto* construct = app.add_subcommand("construct", "Build a map");
  construct->require_subcommand(1);
  std::string f_path, g_path;
  double theta = M_PI / 4;
  std::size_t dim_n = 2;
  int power_m = 2;
  std::vector<std::size_t> coords;
  std::string catalog_name;
  std::optional<double> catalog_theta;

  auto* c_tensor = construct->add_subcommand("tensor", "f tensor g");
  c_tensor->add_option("f", f_path)->required();
  c_tensor->add_option("g", g_path)->required();
  c_tensor->callback([&] { action = [&] { return emit_map(g, tensor(load_map(f_path), load_map(g_path))); }; });

  auto* c_oplus = construct->add_subcommand("oplus", "f oplus g (same denominator)");
  c_oplus->add_option("f", f_path)->required();
  c_oplus->add_option("g", g_path)->required();
  c_oplus->callback([&] { action = [&] { return emit_map(g, oplus(load_map(f_path), load_map(g_path))); }; });

  auto* c_jux = construct->add_subcommand("juxtapose", "cos(theta) f oplus sin(theta) g");
  c_jux->add_option("f", f_path)->required();
  c_jux->add_option("g", g_path)->required();
  c_jux->add_option("--theta", theta)->capture_default_str();
  c_jux->callback([&] {
    action = [&] { return emit_map(g, juxtapose_theta(load_map(f_path), load_map(g_path), theta)); };
  });

  auto* c_desc = construct->add_subcommand("descend", "Replace the part of f along a subspace by its tensor with g");
  c_desc->add_option("f", f_path)->required();
  c_desc->add_option("g", g_path)->required();
  c_desc->add_option("--coords", coords, "1-based target coordinates spanning the subspace; default is the lowest-order part");
  c_desc->callback([&] {
    action = [&] {
      const auto f = load_map(f_path);
      const auto sub = coords.empty() ? lowest_order_subspace(f)
                                      : Subspace::coordinate(f.target_dim(), parse_coords(coords, f.target_dim()));
      return emit_map(g, descend(f, sub, load_map(g_path)));
    };
  });

  auto* c_power = construct->add_subcommand("power", "Tensor power z^(tensor m)");
  c_power->add_option("--n", dim_n)->required();
  c_power->add_option("--m", power_m)->required();
  c_power->callback([&] { action = [&] { return emit_map(g, tensor_power(dim_n, power_m)); }; });

  auto* c_whitney = construct->add_subcommand("whitney", "Whitney map in n variables");
  c_whitney->add_option("--n", dim_n)->required();
  c_whitney->callback([&] { action = [&] { return emit_map(g, whitney(dim_n)); }; });

  auto* c_catalog = construct->add_subcommand("catalog", "Named fixture map");
  c_catalog->add_option("name", catalog_name)->required();
  c_catalog->add_option("--theta", catalog_theta, "Parameter for the example-7-4 families");
  c_catalog->callback([&] { action = [&] { return emit_map(g, catalog(catalog_name, catalog_theta)); }; });

  auto* compose_cmd = app.add_subcommand("compose", "Compose a map with a ball automorphism");
  compose_cmd->require_subcommand(1);
  std::string aut_path;
  for (const char* side : {"source", "target"}) {
    auto* sub = compose_cmd->add_subcommand(side, std::string("Automorphism on the ") + side + " side");
    sub->add_option("map", map_path)->required();
    sub->add_option("automorphism", aut_path, "{\"u\",\"a\"}, {\"permutation\"} or {\"angles\"}")->required();
    const bool source = std::string(side) == "source";
    sub->callback([&, source] {
      action = [&, source] {
        const auto f = load_map(map_path);
        const auto aut = read_json_file(aut_path);
        if (source) return emit_map(g, compose_source(f, automorphism_from_json(aut, f.n())));
        if (f.l() != 0) throw InputError("target composition needs a ball target");
        return emit_map(g, compose_target(f, automorphism_from_json(aut, f.target_dim())));
      };
    });
  }

  auto* realize_cmd = app.add_subcommand("realize", "Construct a map with a prescribed invariant group");
  realize_cmd->require_subcommand(1);
  std::string group_path;
  auto* r_sym = realize_cmd->add_subcommand("symmetric", "Map invariant under all coordinate permutations");
  r_sym->add_option("--n", dim_n)->required();
  r_sym->callback([&] {
    action = [&] { return emit_map(g, symmetric_group_map(dim_n)); };
  });

  auto* r_sub = realize_cmd->add_subcommand("subgroup", "Permutation subgroup from {\"n\", \"generators\"}");
  r_sub->add_option("group", group_path)->required();
  r_sub->callback([&] {
    action = [&] {
      const auto doc = read_json_file(group_path);
      if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw InputError("group needs a positive integer \"n\"");
      }
      const auto n = doc["n"].get<std::size_t>();
      std::vector<Permutation> gens;
      if (doc.contains("generators")) {
        for (const auto& p : doc["generators"]) gens.push_back(permutation_from_json(p, n));
      }
      const auto f = realize_subgroup(n, gens);
      Json group = Json::array();
      for (const auto& p : permutation_group(n, gens)) group.push_back(permutation_to_json(p));
      Json extra = {{"group", group}};
      int code = kOk;
      if (!g.no_check && n <= kMaxPermutationDim) {
        Json stab = Json::array();
        const auto found = permutation_stabilizer(f, g.tol);
        for (const auto& p : found) stab.push_back(permutation_to_json(p));
        extra["permutation_stabilizer"] = stab;
        if (found.size() != group.size()) code = kVerification;
      }
      const int map_code = emit_map(g, f, extra);
      return map_code != kOk ? map_code : code;
    };
  });

  auto* r_inv = realize_cmd->add_subcommand("from-invariants", "Unitary group from {\"generators\", \"invariants\"}");
  r_inv->add_option("group", group_path)->required();
  r_inv->callback([&] {
    action = [&] {
      const auto doc = read_json_file(group_path);
      if (!doc.contains("generators") || !doc["generators"].is_array() || doc["generators"].empty()) {
        throw InputError("group needs a non-empty \"generators\" list");
      }
      std::vector<Matrix> gens;
      for (const auto& m : doc["generators"]) gens.push_back(matrix_from_json(m));
      std::vector<Polynomial> inv;
      if (doc.contains("invariants")) {
        for (const auto& p : doc["invariants"]) inv.push_back(polynomial_from_json(p));
      }
      const auto n = static_cast<std::size_t>(gens.front().rows());
      Json members = Json::array();
      const auto f = realize_from_invariants(n, inv, gens);
      bool all = true;
      for (const auto& u : gens) {
        const auto r = membership(f, BallAutomorphism::unitary(u), g.tol);
        all = all && r.member;
        members.push_back(to_json(r));
      }
      const int map_code = emit_map(g, f, {{"generator_membership", members}});
      return map_code != kOk ? map_code : (all ? kOk : kVerification);
    };
  });

  auto* pad_cmd = app.add_subcommand("pad", "Complete a polynomial map p to a proper map (eps p, q)");
  std::optional<double> epsilon;
  std::vector<double> weights;
  pad_cmd->add_option("map", map_path, "Polynomial map JSON holding p")->required();
  pad_cmd->add_option("--epsilon", epsilon, "Use this epsilon instead of half the supremum");
  pad_cmd->add_option("--weights", weights, "Squared degree weights, summing to one");
  pad_cmd->callback([&] {
    action = [&] {
      PadOptions opts;
      opts.epsilon = epsilon;
      if (!weights.empty()) opts.weights = weights;
      const auto r = pad_to_proper(load_map(map_path), opts);
      Json extra = to_json(r);
      extra.erase("map");
      return emit_map(g, r.map, {{"pad", extra}});
    };
  });

  auto* member_cmd = app.add_subcommand("member", "Test whether an automorphism lies in the invariant group");
  member_cmd->add_option("map", map_path)->required();
  member_cmd->add_option("automorphism", aut_path)->required();
  member_cmd->callback([&] {
    action = [&] {
      const auto f = load_map(map_path);
      const auto r = membership(f, automorphism_from_json(read_json_file(aut_path), f.n()), g.tol);
      emit(g, {{"membership", to_json(r)}});
      return kOk;
    };
  });

  auto* emit_cmd = app.add_subcommand("emit-system", "Polynomial system for the invariant group in SU(n,1)");
  emit_cmd->add_option("map", map_path)->required();
  emit_cmd->callback([&] {
    action = [&] {
      emit(g, {{"system", to_json(emit_invariance_system(load_map(map_path)))}});
      return kOk;
    };
  });

  auto* sample_cmd = app.add_subcommand("sample", "Sphere sampling check of ||f||^2 = 1");
  sample_cmd->add_option("map", map_path)->required();
  sample_cmd->callback([&] {
    action = [&] {
      const auto r = sphere_sample_check(load_map(map_path), g.samples, g.sample_tol, g.seed);
      emit(g, {{"sample", to_json(r)}});
      return r.pass ? kOk : kVerification;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    return action();
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kCapability;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::logic_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const GroupClosureError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
