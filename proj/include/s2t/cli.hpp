#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s2t/embed.hpp"
#include "s2t/errors.hpp"
#include "s2t/json_io.hpp"
#include "s2t/tower.hpp"
#include "s2t/verify.hpp"

namespace s2t {

// Exit-code contract, used by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitSearchExhaustion = 3;

struct RunConfig {
  std::size_t n = 0;
  std::size_t r = 0;
  std::vector<std::pair<std::string, RationalMatrix>> h_gens;
  std::vector<GroupWord> a_words;  // over the h_gens table
  int stages = 0;
  int enum_radius = 2;
  int cert_radius = 4;
  int exponent_cap = 3;
  int lmax_exp = 10;
  int retry_cap = 8;
  int conj_radius = 4;
  int classify_radius = 4;
  int height_bound = 10;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::uint64_t hash = 0;  // of the raw config bytes
};

namespace cdetail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

inline Json parse_json(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("malformed JSON in " + what);
  return j;
}

inline std::int64_t created_epoch() {
  const char* v = std::getenv("SOURCE_DATE_EPOCH");
  if (!v) return 0;
  try {
    return std::stoll(v);
  } catch (...) {
    return 0;
  }
}

// Exclusive lock file guarding a state file against concurrent mutation.
class StateLock {
 public:
  explicit StateLock(const std::string& state_path) : path_(state_path + ".lock") {
    std::filesystem::path p(path_);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0)
      throw InputError("state lock already held: " + path_ +
                       " (another run in progress? remove the file if it is stale)");
  }
  ~StateLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      ::unlink(path_.c_str());
    }
  }
  StateLock(const StateLock&) = delete;
  StateLock& operator=(const StateLock&) = delete;

 private:
  std::string path_;
  int fd_ = -1;
};

inline int positive(const Json& j, const char* field, int fallback) {
  int v = j.value(field, fallback);
  if (v <= 0) throw InputError(std::string("config: budget ") + field + " must be positive");
  return v;
}

}  // namespace cdetail

inline RunConfig parse_config(const std::string& text) {
  Json j = cdetail::parse_json(text, "config");
  RunConfig cfg;
  // Hash the mathematical content only: the output location does not change
  // what was proven, so it must not change the recorded hash.
  Json canon = j;
  canon.erase("out");
  cfg.hash = cdetail::fnv1a(canon.dump());
  try {
    cfg.n = j.at("n").get<std::size_t>();
    cfg.r = j.at("r").get<std::size_t>();
    cfg.h_gens = named_gens_from_json(j.at("hGens"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    const Json b = j.value("budgets", Json::object());
    cfg.stages = b.value("stages", 0);
    if (cfg.stages < 0) throw InputError("config: budget stages must not be negative");
    cfg.enum_radius = cdetail::positive(b, "enumRadius", cfg.enum_radius);
    cfg.cert_radius = cdetail::positive(b, "certRadius", cfg.cert_radius);
    cfg.exponent_cap = cdetail::positive(b, "exponentCap", cfg.exponent_cap);
    cfg.lmax_exp = cdetail::positive(b, "LmaxExp", cfg.lmax_exp);
    cfg.retry_cap = cdetail::positive(b, "retryCap", cfg.retry_cap);
    cfg.conj_radius = cdetail::positive(b, "conjRadius", cfg.conj_radius);
    cfg.classify_radius = cdetail::positive(b, "classifyRadius", cfg.classify_radius);
    cfg.height_bound = cdetail::positive(b, "heightBound", cfg.height_bound);
  } catch (const Json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (cfg.h_gens.empty()) throw InputError("config: hGens must not be empty");
  for (const auto& [name, m] : cfg.h_gens)
    if (m.n() != cfg.n)
      throw InputError("config: generator '" + name + "' has the wrong dimension");
  if (cfg.r > cfg.n) throw InputError("config: r exceeds n");
  if ((cfg.n - cfg.r) % 2 != 0)
    throw InputError(
        "config: n-r must be even, otherwise t has determinant -1 (determinant constraint)");
  if (cfg.r < (cfg.n - cfg.r) + 2) throw InputError("config: need r >= (n-r)+2");
  // Subgroup words parse against the generator names.
  GeneratorTable htab;
  for (const auto& [name, m] : cfg.h_gens) htab.add(name, Factor::Base, m);
  try {
    for (const Json& w : j.value("aWords", Json::array()))
      cfg.a_words.push_back(word_from_json(w, htab));
  } catch (const Json::exception& e) {
    throw InputError(std::string("config: aWords: ") + e.what());
  }
  return cfg;
}

// Flag values shared by the subcommands; empty/negative means "not given".
struct CliOptions {
  std::string config;
  std::string state;
  std::string out;
  std::string cert_path;
  std::string cert_mode;  // "show" or "replay"
  int stages = -1;
  int radius = -1;
  std::optional<std::uint64_t> seed;
  bool resume = false;
};

namespace cdetail {

inline TowerOpts tower_opts(const RunConfig& cfg) {
  TowerOpts t;
  t.exponent_cap = cfg.exponent_cap;
  t.conj_radius = cfg.conj_radius;
  t.embed.lmax_exp = cfg.lmax_exp;
  t.embed.basis_retries = cfg.retry_cap;
  t.embed.conj_radius = cfg.conj_radius;
  t.embed.choose.height = cfg.height_bound;
  return t;
}

inline void stamp(TowerState& st, const RunConfig& cfg) {
  std::int64_t created = created_epoch();
  for (StepRecord& r : st.history)
    if (r.has_cert) {
      r.cert.config_hash = cfg.hash;
      r.cert.created = created;
    }
}

inline std::string state_path(const CliOptions& opt, const RunConfig& cfg) {
  if (!opt.state.empty()) return opt.state;
  std::string dir = !opt.out.empty() ? opt.out : cfg.out_dir;
  return dir + "/tower.json";
}

inline std::string out_dir(const CliOptions& opt, const RunConfig& cfg) {
  return !opt.out.empty() ? opt.out : cfg.out_dir;
}

inline void write_state_and_certs(const TowerState& st, const std::string& spath,
                                  const std::string& dir) {
  write_text(spath, state_to_json(st).dump(2) + "\n");
  for (std::size_t i = 0; i < st.history.size(); ++i) {
    if (!st.history[i].has_cert) continue;
    char idx[8];
    std::snprintf(idx, sizeof idx, "%03zu", i);
    write_text(dir + "/certs/cert-" + idx + "-" + st.history[i].kind + ".json",
               certificate_to_json(st.history[i].cert).dump(2) + "\n");
  }
}

}  // namespace cdetail

inline int cmd_bootstrap(const CliOptions& opt) {
  if (opt.config.empty()) throw InputError("bootstrap: --config is required");
  RunConfig cfg = parse_config(cdetail::read_text(opt.config));
  if (opt.seed) cfg.seed = *opt.seed;
  int radius = opt.radius > 0 ? opt.radius : cfg.cert_radius;
  std::string spath = cdetail::state_path(opt, cfg);
  cdetail::StateLock lock(spath);

  TowerState st = bootstrap(cfg.h_gens, cfg.a_words, cfg.r, radius, cfg.seed,
                            cdetail::tower_opts(cfg));
  cdetail::stamp(st, cfg);
  cdetail::write_state_and_certs(st, spath, cdetail::out_dir(opt, cfg));

  const EmbeddingCertificate& c = st.history.front().cert;
  std::cout << "bootstrap: ok\n"
            << "  pivot t = diag(1 x " << cfg.r << ", -1 x " << cfg.n - cfg.r << ")\n"
            << "  scaling L = " << c.scheme.L.str() << "\n"
            << "  scan radius " << c.radius << ", alphabet ball " << c.exponent_cap
            << ", words checked " << c.checked_words << "\n"
            << "  involution conjugacy radius " << c.involution_conjugacy_radius << "\n"
            << "  state " << spath << "\n";
  return kExitOk;
}

inline int cmd_tower(const CliOptions& opt) {
  if (opt.config.empty()) throw InputError("tower: --config is required");
  RunConfig cfg = parse_config(cdetail::read_text(opt.config));
  if (opt.seed) cfg.seed = *opt.seed;
  std::string spath = cdetail::state_path(opt, cfg);
  TowerState st = state_from_json(cdetail::parse_json(cdetail::read_text(spath), spath));
  cdetail::StateLock lock(spath);

  TowerBudget budget;
  budget.stages = opt.stages >= 0 ? opt.stages : cfg.stages;
  budget.enum_radius = cfg.enum_radius;
  budget.cert_radius = opt.radius > 0 ? opt.radius : cfg.cert_radius;
  budget.classify_radius = cfg.classify_radius;
  budget.opts = cdetail::tower_opts(cfg);

  StageReport rep;
  std::string dir = cdetail::out_dir(opt, cfg);
  try {
    rep = run_tower(st, budget);
  } catch (...) {
    // Keep whatever stages completed; the state stays resumable.
    cdetail::stamp(st, cfg);
    cdetail::write_state_and_certs(st, spath, dir);
    throw;
  }
  cdetail::stamp(st, cfg);
  cdetail::write_state_and_certs(st, spath, dir);

  for (const auto& r : rep.rows)
    std::cout << "  v=" << to_string(r.v, st.table) << " -> " << r.action << " (" << r.detail
              << ")\n";
  std::cout << "tower: stage " << st.stage << " of " << budget.stages << ", ledger "
            << st.ledger.size() << " entries, state " << spath << "\n";
  if (rep.exhausted && st.stage < budget.stages)
    throw SearchError("tower-candidates-exhausted: enumeration ball at radius " +
                      std::to_string(budget.enum_radius) + " has no unprocessed candidates");
  return kExitOk;
}

inline int cmd_verify(const CliOptions& opt) {
  if (opt.state.empty() && opt.config.empty())
    throw InputError("verify: need --state (or --config to locate the default state)");
  std::string spath = opt.state;
  std::string dir = !opt.out.empty() ? opt.out : "";
  if (spath.empty()) {
    RunConfig cfg = parse_config(cdetail::read_text(opt.config));
    spath = cdetail::state_path(opt, cfg);
    if (dir.empty()) dir = cdetail::out_dir(opt, cfg);
  }
  if (dir.empty()) dir = std::filesystem::path(spath).parent_path().string();
  if (dir.empty()) dir = ".";
  TowerState st = state_from_json(cdetail::parse_json(cdetail::read_text(spath), spath));

  int radius = opt.radius > 0 ? opt.radius : 4;
  int coset_radius = 3;
  int membership_radius = 2 * coset_radius;
  Involution t = st.t();

  std::vector<VerificationReport> reports;
  reports.push_back(check_malnormal(st.table, st.a_gens, radius, radius));
  reports.push_back(check_no_involutions(st.table, st.a_gens, radius));
  reports.push_back(
      check_sharp2trans_witnesses(st.table, st.t_mat, st.a_gens, st.ledger, radius));
  ActionBall ab = build_action_ball(st.table, st.a_gens, coset_radius, membership_radius);
  reports.push_back(check_pchar2(st.table, st.a_gens, ab));
  reports.push_back(check_embedded_action(st.table, 1, st.h_count, st.a0_count, st.a_gens,
                                          coset_radius, membership_radius));
  reports.push_back(check_commuting_normal_ball(st.table, 2));

  // The two ball-level conditions the construction maintains, rechecked.
  ConditionReport aux = verify_aux_condition(st.table, t, radius);
  VerificationReport aux_rep;
  aux_rep.check = "aux-condition";
  aux_rep.radius("ball", radius);
  for (const auto& it : aux.items)
    if (!it.pass) aux_rep.fail(it.witness);
  reports.push_back(std::move(aux_rep));
  ConditionReport inv = check_involutions_conjugate_ball(st.table, t, radius, radius);
  VerificationReport inv_rep;
  inv_rep.check = "involutions-conjugate";
  inv_rep.radius("ball", radius);
  inv_rep.radius("conjugacy", radius);
  for (const auto& it : inv.items)
    if (!it.pass) inv_rep.fail(it.witness);
  reports.push_back(std::move(inv_rep));

  bool all = true;
  Json checks = Json::array();
  for (const auto& r : reports) {
    all = all && r.pass;
    checks.push_back(report_to_json(r));
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.check;
    for (const auto& w : r.witnesses) std::cout << "\n       witness: " << w;
    std::cout << "\n";
  }
  Json out{{"allPass", all}, {"seed", st.seed}, {"stage", st.stage}, {"checks", checks}};
  cdetail::write_text(dir + "/report.json", out.dump(2) + "\n");
  std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES above\n");
  return all ? kExitOk : kExitVerificationFailure;
}

inline int cmd_cert(const CliOptions& opt) {
  if (opt.cert_path.empty()) throw InputError("cert: a certificate path is required");
  if (opt.cert_mode != "show" && opt.cert_mode != "replay")
    throw InputError("cert: mode must be 'show' or 'replay'");
  EmbeddingCertificate c = certificate_from_json(
      cdetail::parse_json(cdetail::read_text(opt.cert_path), opt.cert_path));
  if (opt.cert_mode == "show") {
    std::cout << "kind            " << c.kind << "\n"
              << "scaling L       " << c.scheme.L.str() << "\n"
              << "scan radius     " << c.radius << "\n"
              << "alphabet ball   " << c.exponent_cap << "\n"
              << "words checked   " << c.checked_words << "\n"
              << "aux condition   " << (c.aux ? "pass" : "fail") << "\n"
              << "involutions     conjugate within " << c.involution_conjugacy_radius << "\n"
              << "seed            " << c.seed << "\n"
              << "config hash     " << c.config_hash << "\n";
    for (const auto& v : c.violations) std::cout << "violation       " << v << "\n";
    return kExitOk;
  }
  ReplayResult rr = replay_certificate(c);
  if (rr.ok) {
    std::cout << "replay: agreement (" << rr.checked << " words re-checked)\n";
    return kExitOk;
  }
  std::cout << "replay: MISMATCH: " << rr.detail << "\n";
  return kExitVerificationFailure;
}

// Shared entry point: dispatch and fold errors into the exit-code contract.
inline int run_cli(const std::string& command, const CliOptions& opt) {
  try {
    if (command == "bootstrap") return cmd_bootstrap(opt);
    if (command == "tower") return cmd_tower(opt);
    if (command == "verify") return cmd_verify(opt);
    if (command == "cert") return cmd_cert(opt);
    throw InputError("unknown command '" + command + "'");
  } catch (const SearchError& e) {
    std::cerr << "search exhausted: " << e.what() << "\n";
    return kExitSearchExhaustion;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace s2t
