#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "annc/cumulant_engine.hpp"
#include "annc/matrix_cumulants.hpp"
#include "annc/mc_lab.hpp"
#include "annc/noncrossing.hpp"
#include "annc/premaps.hpp"
#include "annc/sd_poset.hpp"
#include "annc/weingarten.hpp"

using namespace annc;
using json = nlohmann::ordered_json;

namespace {

// input problems that are not flag syntax: exit 1
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool as_float = false;

json num(const Rational& r) {
  if (as_float) return r.get_d();
  return r.get_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    if (j.is_string())
      std::cout << j.get<std::string>() << "\n";
    else
      std::cout << j.dump(1) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw ValidationError("cannot write " + out);
  f << j.dump(1) << "\n";
}

std::vector<std::string> strs(const std::vector<Permutation>& v) {
  std::vector<std::string> out;
  for (const auto& p : v) out.push_back(p.str());
  return out;
}

AnnulusShape shape_of(int p, int q) {
  if (p < 1 || q < 1) throw ValidationError("--p and --q must be positive");
  if (p + q > enumeration_bound()) throw ValidationError("p+q exceeds the enumeration bound");
  return {p, q};
}

json run_enumerate(const std::string& family, int n, int p, int q) {
  if (family == "nc") {
    if (n < 1 || n > enumeration_bound()) throw ValidationError("--n out of range");
    return strs(enumerate_nc(n));
  }
  if (family == "pm" || family == "pm-nc") {
    if (n < 1 || n > 6) throw ValidationError("--n out of range for premaps (1..6)");
    json out = json::array();
    if (family == "pm")
      for (const auto& m : all_premaps(n)) out.push_back(m.str());
    else
      for (const auto& m : enumerate_pm_nc(tau_n(n))) out.push_back(m.str());
    return out;
  }
  auto s = shape_of(p, q);
  if (family == "disc") return strs(enumerate_disc_nc(s));
  if (family == "ann") return strs(enumerate_ann_nc(s));
  if (family == "ps" || family == "ps-prime") {
    json out = json::array();
    for (const auto& pp : family == "ps" ? enumerate_ps(s) : enumerate_ps_prime(s))
      out.push_back({{"partition", pp.partition.str()}, {"perm", pp.perm.str()}});
    return out;
  }
  if (family == "sd") {
    json out = json::array();
    for (const auto& e : sd_elements(s)) out.push_back(e.str());
    return out;
  }
  throw ValidationError("unknown family " + family);
}

// listing order for the mobius subcommand: disc copy, hatted copy, annular middle
std::vector<std::size_t> cli_order(const MobiusTable& t) {
  std::vector<std::size_t> idx;
  for (SdTag tag : {SdTag::Disc, SdTag::DiscHat, SdTag::Annular})
    for (std::size_t i = 0; i < t.elements.size(); ++i)
      if (t.elements[i].tag == tag) idx.push_back(i);
  return idx;
}

int run_mobius(int p, int q, const std::vector<std::size_t>& pair, bool completed, const std::string& out) {
  auto t = mobius_recursive(shape_of(p, q));
  auto order = cli_order(t);
  auto closed = [&](const SdElement& a, const SdElement& b) {
    return completed ? mobius_closed_completed(a, b) : mobius_closed(a, b);
  };
  if (!pair.empty()) {
    if (pair.size() != 2 || pair[0] >= order.size() || pair[1] >= order.size())
      throw ValidationError("--pair needs two indices below " + std::to_string(order.size()));
    auto i = order[pair[0]], k = order[pair[1]];
    const auto& a = t.elements[i];
    const auto& b = t.elements[k];
    if (!sd_leq(a, b)) throw ValidationError(a.str() + " is not below " + b.str());
    auto rec = t.at(i, k);
    auto cl = closed(a, b);
    if (rec != cl)
      std::cerr << "note: closed form gives " << cl.get_str() << " for " << a.str() << " <= " << b.str()
                << "; the recursive value is reported\n";
    emit(num(rec), out);
    return 0;
  }
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  json j;
  j["p"] = p;
  j["q"] = q;
  j["elements"] = json::array();
  for (auto i : order) j["elements"].push_back(t.elements[i].str());
  j["mu"] = json::array();
  for (const auto& [ab, v] : t.mu) j["mu"].push_back({pos[ab.first], pos[ab.second], num(v)});
  j["discrepancies"] = json::array();
  for (const auto& d : mobius_discrepancies(t, completed))
    j["discrepancies"].push_back({{"a", d.a.str()}, {"b", d.b.str()}, {"recursive", num(d.recursive)}, {"closed", num(d.closed)}});
  emit(j, out);
  return 0;
}

int run_transform(const std::string& dir, int order, const std::string& input, const std::string& out) {
  auto text = read_file(input);
  json j;
  try {
    if (dir == "m2c") {
      auto m = MomentOracle::from_json(text);
      CumulantTable k;
      for (const auto& [key, _] : m.table1()) k.set1(parse_word(key), free_cumulant(m, parse_word(key)));
      if (order == 2)
        for (const auto& [key, _] : m.table2()) {
          auto bar = key.find('|');
          auto a = parse_word(key.substr(0, bar)), b = parse_word(key.substr(bar + 1));
          k.set2(a, b, kappa_pq(m, a, b));
        }
      j = json::parse(k.to_json());
    } else {
      auto k = CumulantTable::from_json(text);
      MomentOracle m;
      for (const auto& [key, _] : k.table1()) m.set1(parse_word(key), free_moment(k, parse_word(key)));
      if (order == 2)
        for (const auto& [key, _] : k.table2()) {
          auto bar = key.find('|');
          auto a = parse_word(key.substr(0, bar)), b = parse_word(key.substr(bar + 1));
          m.set2(a, b, alpha_pq(k, a, b));
        }
      j = json::parse(m.to_json());
    }
  } catch (const std::out_of_range& e) {
    throw ValidationError(std::string("input table is incomplete: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad JSON: ") + e.what());
  }
  if (as_float)
    for (auto& [name, table] : j.items())
      for (auto& [key, v] : table.items()) v = parse_rational(v.get<std::string>()).get_d();
  emit(j, out);
  return 0;
}

int run_weingarten(int n, long N, const std::string& type, const std::string& out) {
  const auto& ctx = wg_context(n, N);
  if (!type.empty()) {
    std::vector<int> t;
    std::stringstream ss(type);
    for (std::string part; std::getline(ss, part, ',');) t.push_back(std::stoi(part));
    std::sort(t.rbegin(), t.rend());
    int sum = 0;
    for (int x : t) sum += x;
    if (sum != n) throw ValidationError("coset type must sum to --n");
    json j;
    j["wg"] = num(ctx.by_type(t));
    std::vector<int> sizes;
    for (int x : t) sizes.push_back(x);
    j["wg_normalized"] = num(wg_normalized(sizes, N));
    emit(j, out);
    return 0;
  }
  json j = json::object();
  for (const auto& [t, v] : ctx.table()) {
    std::string key;
    for (int x : t) key += (key.empty() ? "" : ",") + std::to_string(x);
    j[key] = num(v);
  }
  emit(j, out);
  return 0;
}

TraceModel model_from_json(const json& m, long N) {
  static const std::set<std::string> known{"model", "seed", "diagonals", "values", "weights"};
  for (auto& [k, _] : m.items())
    if (!known.count(k)) throw ValidationError("unknown model field " + k);
  auto kind = m.value("model", std::string());
  if (kind == "random") return random_trace_model(m.value("seed", 1UL));
  if (kind == "three-point") return spectrum_model(three_point_spectrum(N), 8);
  if (kind == "steps") {
    auto values = m.at("values");
    auto weights = m.at("weights");
    if (values.size() != weights.size()) throw ValidationError("values and weights differ in length");
    std::vector<Rational> d;
    for (std::size_t i = 0; i < values.size(); ++i) {
      Rational w = parse_rational(weights[i].is_string() ? weights[i].get<std::string>() : weights[i].dump());
      Rational count = w * N;
      if (count.get_den() != 1) throw ValidationError("weights times N must be integers");
      Rational v = parse_rational(values[i].is_string() ? values[i].get<std::string>() : values[i].dump());
      for (long c = 0; c < count.get_num().get_si(); ++c) d.push_back(v);
    }
    if (static_cast<long>(d.size()) != N) throw ValidationError("weights must sum to 1");
    return spectrum_model(d, 8);
  }
  if (kind == "diagonal") {
    std::vector<std::vector<Rational>> ds;
    for (const auto& row : m.at("diagonals")) {
      std::vector<Rational> d;
      for (const auto& x : row) d.push_back(parse_rational(x.is_string() ? x.get<std::string>() : x.dump()));
      ds.push_back(d);
    }
    if (ds.empty() || static_cast<long>(ds[0].size()) != N) throw ValidationError("diagonal length must equal --dim");
    return diagonal_model(ds);
  }
  throw ValidationError("model must be random, three-point, steps or diagonal");
}

json load_model(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad model JSON: ") + e.what());
  }
}

int run_vertex(const std::string& model, const std::string& pi_text, long N, const std::string& u_text,
               const std::string& out) {
  auto pi = Premap::parse(pi_text);
  MatrixCumulants mc(model_from_json(load_model(model), N), N);
  auto u = u_text.empty() ? one_block(pi) : SetPartition::parse(u_text);
  json j;
  j["premap"] = pi.str();
  j["U"] = u.str();
  j["N"] = N;
  j["c"] = num(mc.c(pi));
  j["K"] = num(mc.vertex(u, pi));
  j["moment"] = num(mc.moment(pi));
  emit(j, out);
  return 0;
}

std::vector<long> parse_dims(const std::string& s) {
  std::vector<long> v;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) v.push_back(std::stol(part));
  return v;
}

int run_sweep(const std::string& model, const std::string& dims, const std::vector<int>& r, bool limit,
              const std::string& out) {
  auto desc = load_model(model);
  auto family = [&](long N) { return model_from_json(desc, N); };
  auto Ns = parse_dims(dims);
  auto s = asymptotic_order_sweep(family, r, Ns);
  json j;
  j["r"] = r;
  j["points"] = json::array();
  for (const auto& p : s.points) j["points"].push_back({{"N", p.N}, {"abs_K", p.value}});
  j["slope"] = s.slope;
  j["expected_slope"] = s.expected;
  j["ok"] = s.ok();
  int status = s.ok() ? 0 : 1;
  if (limit) {
    if (r.size() != 2) throw ValidationError("--limit needs two cycle lengths");
    auto est = second_order_limit(family, r[0], r[1], Ns);
    j["scaled"] = json::array();
    for (const auto& [N, v] : est.scaled) j["scaled"].push_back({{"N", N}, {"N2K", num(v)}});
    j["extrapolated"] = est.extrapolated;
  }
  emit(j, out);
  return status;
}

int run_simulate(int N, std::uint64_t samples, std::uint64_t seed, const std::string& battery, int jobs,
                 const std::string& out) {
  auto rep = validate_against_exact(battery_by_name(battery, N), samples, seed, jobs);
  emit(json::parse(rep.to_json()), out);
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annular noncrossing permutations, real second-order cumulants and vertex cumulants"};
  app.require_subcommand(1);
  app.add_flag("--float", as_float, "print decimals instead of exact fractions");
  std::string out;
  int jobs = 0;

  auto* en = app.add_subcommand("enumerate", "list a family of permutations or premaps");
  std::string family;
  int n = 0, p = 0, q = 0;
  en->add_option("--family", family, "nc, disc, ann, ps, ps-prime, sd, pm, pm-nc")->required();
  en->add_option("--n", n);
  en->add_option("--p", p);
  en->add_option("--q", q);
  en->add_option("--out", out);

  auto* mo = app.add_subcommand("mobius", "Möbius function of the self-dual poset");
  std::vector<std::size_t> pair;
  bool completed = false;
  mo->add_option("--p", p)->required();
  mo->add_option("--q", q)->required();
  mo->add_option("--pair", pair)->expected(2);
  mo->add_flag("--completed", completed, "compare against the completed closed form");
  mo->add_option("--out", out);

  auto* tr = app.add_subcommand("transform", "moments to cumulants or back");
  std::string dir, input;
  int order = 2;
  tr->add_option("--dir", dir)->required()->check(CLI::IsMember({"m2c", "c2m"}));
  tr->add_option("--order", order)->check(CLI::IsMember({1, 2}));
  tr->add_option("--input", input)->required();
  tr->add_option("--out", out);

  auto* wg = app.add_subcommand("weingarten", "orthogonal Weingarten values");
  long dim = 0;
  std::string type;
  wg->add_option("--n", n)->required()->check(CLI::Range(1, 5));
  wg->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
  wg->add_option("--coset-type", type);
  wg->add_option("--out", out);

  auto* ga = app.add_subcommand("gamma", "leading Weingarten cumulant coefficient");
  std::string us, vs;
  bool sp = false;
  ga->add_option("--u", us)->required();
  ga->add_option("--v", vs)->required();
  ga->add_flag("--sp", sp, "symplectic coefficient");

  auto* pm = app.add_subcommand("premap", "premap data relative to a base");
  std::string pis, base;
  pm->add_option("--pi", pis)->required();
  pm->add_option("--base", base, "premap or permutation; defaults to one cycle on the support");
  pm->add_option("--p", p);
  pm->add_option("--q", q);

  auto* ve = app.add_subcommand("vertex", "matrix and vertex cumulants of a trace model");
  std::string model, ut;
  ve->add_option("--model", model)->required();
  ve->add_option("--pi", pis)->required();
  ve->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
  ve->add_option("--u", ut);
  ve->add_option("--out", out);

  auto* sw = app.add_subcommand("sweep", "order of vertex cumulants across N");
  std::string dims = "8,16,32,64";
  std::vector<int> r{1, 1};
  bool limit = false;
  sw->add_option("--model", model)->required();
  sw->add_option("--dims", dims);
  sw->add_option("--r", r)->delimiter(',');
  sw->add_flag("--limit", limit, "Richardson limit of N^2 K for two cycles");
  sw->add_option("--report", out);

  auto* si = app.add_subcommand("simulate", "Monte Carlo battery against exact values");
  std::uint64_t samples = 100000, seed = 1;
  std::string battery = "haar-basic";
  int sdim = 8;
  si->add_option("--dim", sdim)->check(CLI::Range(2, 64));
  si->add_option("--samples", samples)->check(CLI::PositiveNumber);
  si->add_option("--seed", seed);
  si->add_option("--battery", battery)->check(CLI::IsMember({"haar-basic", "two-vertex"}));
  si->add_option("--jobs", jobs);
  si->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*en) {
      emit(run_enumerate(family, n, p, q), out);
      return 0;
    }
    if (*mo) return run_mobius(p, q, pair, completed, out);
    if (*tr) return run_transform(dir, order, input, out);
    if (*wg) return run_weingarten(n, dim, type, out);
    if (*ga) {
      auto u = SetPartition::parse(us), v = SetPartition::parse(vs);
      emit(num(sp ? gamma_sp(u, v) : gamma(u, v)), "");
      return 0;
    }
    if (*pm) {
      auto m = Premap::parse(pis);
      json j;
      j["premap"] = m.str();
      j["Pi"] = pairing_partition(m).str();
      if (!base.empty()) {
        auto b = Premap::parse(base);
        j["kreweras"] = premap_kreweras(m, b).str();
        j["chi"] = premap_euler(m, b);
      } else {
        Permutation tau = p > 0 && q > 0 ? tau_pq(p, q) : tau_n(m.n());
        if (tau.ground() != m.support()) throw ValidationError("premap support must be 1..p+q");
        j["kreweras"] = premap_kreweras(m, tau).str();
        j["chi"] = premap_euler(m, tau);
        j["pm_nc"] = is_pm_nc(m, tau);
        if (p > 0 && q > 0) {
          try {
            auto t = trisect(m, {p, q});
            j["family"] = to_string(t.family);
            j["perm"] = t.perm.str();
          } catch (const std::invalid_argument&) {
            j["family"] = nullptr;
          }
        }
      }
      std::cout << j.dump(1) << "\n";
      return 0;
    }
    if (*ve) return run_vertex(model, pis, dim, ut, out);
    if (*sw) return run_sweep(model, dims, r, limit, out);
    if (*si) return run_simulate(sdim, samples, seed, battery, jobs, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
