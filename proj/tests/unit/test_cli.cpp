#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "qss/analysis.hpp"
#include "qss/cli/config.hpp"
#include "qss/cli/report.hpp"
#include "qss/cli/sweep.hpp"
#include "qss/cli/validate.hpp"
#include "qss/errors.hpp"

using namespace qss;
using namespace qss::cli;

namespace {

KeyValueFile kv(const std::string& text) {
  std::istringstream in(text);
  return KeyValueFile::parse(in);
}

std::string csv(const SweepSpec& spec, std::size_t workers) {
  std::ostringstream out;
  write_csv(run_sweep(spec, workers), out);
  return out.str();
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "qss_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

int run_qss(const std::string& args) {
  const std::string cmd = std::string(QSS_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("key-value parsing") {
  const auto f = kv("# header\nparties = 3 # trailing\n\n  channel=pdc\n");
  CHECK(f.get("parties") == "3");
  CHECK(f.get("channel") == "pdc");
  CHECK_FALSE(f.has("strength"));
  CHECK_THROWS_AS(kv("parties 3\n"), ParseError);
  CHECK_THROWS_AS(kv("a = 1\na = 2\n"), ParseError);
  CHECK_THROWS_AS(kv(" = 2\n"), ParseError);
}

TEST_CASE("value parsing") {
  CHECK(parse_real(" 0.25 ", "x") == 0.25);
  CHECK_THROWS_AS(parse_real("0.2.5", "x"), ParseError);
  CHECK_THROWS_AS(parse_count("-3", "n"), ParseError);
  CHECK(parse_switch("ON", "w"));
  CHECK_THROWS_AS(parse_switch("maybe", "w"), ParseError);
  CHECK(parse_real_list("0.1, 0.2,0.3", "l").size() == 3);
}

TEST_CASE("float formatting") {
  CHECK(format_real(2.0 / 3.0) == "0.666666666667");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(format_real(-HUGE_VAL) == "-inf");
  CHECK(round_real(2.0 / 3.0) == 0.666666666667);
}

TEST_CASE("run config") {
  const auto c = run_config_from(kv("parties = 3\nsecret_k = 0.3\nchannel = adc\nstrength = 0.2\n"));
  CHECK(c.protocol.parties == 3);
  CHECK(c.protocol.secrets.size() == 1);
  CHECK(c.protocol.channel->kind == ChannelKind::AmplitudeDamping);

  const auto seq = run_config_from(kv("iterations = 3\nsecret_k = 0.1, 0.2, 0.3\n"));
  CHECK(seq.protocol.secrets.size() == 3);
  CHECK(seq.protocol.secrets[2].k() == doctest::Approx(0.3));

  CHECK_THROWS_AS(run_config_from(kv("secret_k = 0.3\nbogus = 1\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("parties = 3\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("secret_k = 1.3\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("secret_k = 0.3\nchannel = adc\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("secret_k = 0.3\nchannel = xyz\nstrength = 1\n")), ParseError);
  CHECK_THROWS_AS(run_config_from(kv("iterations = 2\nsecret_k = 0.1, 0.2, 0.3\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("secret_k = 0.3\nweak_strength = 0.3\n")), ConfigError);
  CHECK_THROWS_AS(run_config_from(kv("secret_k = 0.3\nchannel = pdc\nstrength = 0.1\nwmrqm = on\n"
                                     "weak_strength = 0.3\nreverse_strength = opt\n")),
                  ConfigError);
}

TEST_CASE("run report: three parties, noiseless") {
  const auto j = run_report(run_config_from(kv("parties = 3\nsecret_k = 0.3\n")));
  CHECK(j["aggregate_fidelity"].get<double>() == 1.0);
  CHECK(j["iterations"][0]["branches"].size() == 8);
  CHECK(j["validation"]["probability_sum_residual"].get<double>() < 1e-12);
}

TEST_CASE("run report: amplitude damping p = 1 averaged over k") {
  const auto j = run_report(run_config_from(kv("average_over_k = on\nchannel = adc\nstrength = 1\n")));
  CHECK(j["aggregate_fidelity"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("run report: five parties, every branch perfect") {
  const auto j = run_report(run_config_from(kv("parties = 5\nsecret_k = 0.65\nsecret_phase = 2.1\n")));
  const auto& branches = j["iterations"][0]["branches"];
  CHECK(branches.size() == 32);
  for (const auto& b : branches) {
    CHECK(b["fidelity"].get<double>() == 1.0);
  }
}

TEST_CASE("run report: closed-form residual and optimal reverse strength") {
  const auto j = run_report(run_config_from(
      kv("secret_k = 0.5\nchannel = adc\nstrength = 0.6\nwmrqm = on\nweak_strength = 0.4\nreverse_strength = opt\n")));
  CHECK(j["validation"]["closed_form_residual"].get<double>() < 1e-10);
  CHECK(j["iterations"][0]["reverse_strength"].get<double>() ==
        doctest::Approx(analysis::r_opt(0.5, 0.4, 0.6)).epsilon(1e-11));
  CHECK(j["validation"]["probability_sum_residual"].get<double>() < 1e-12);
}

TEST_CASE("run report: r_opt outside its region is a domain error") {
  const auto cfg = run_config_from(
      kv("secret_k = 0.01\nchannel = adc\nstrength = 0.5\nwmrqm = on\nweak_strength = 0.5\nreverse_strength = opt\n"));
  CHECK_THROWS_AS(run_report(cfg), DomainError);
}

TEST_CASE("run report is deterministic and key order is stable") {
  const auto cfg = run_config_from(kv("iterations = 2\nsecret_k = 0.2, 0.7\nchannel = pdc\nstrength = 0.3\n"));
  const auto a = run_report(cfg).dump();
  CHECK(a == run_report(cfg).dump());
  CHECK(a.find("\"command\"") < a.find("\"config\""));
  CHECK(a.find("\"config\"") < a.find("\"iterations\""));
}

TEST_CASE("sweep spec validation") {
  CHECK_THROWS_AS(sweep_spec_from(kv("axis1 = q, 0, 1, 3\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = nope\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = avg_f_pd\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = avg_f_pd\naxis1 = q, 0, 1, 1\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = avg_f_pd\naxis1 = q, 0, 2, 5\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = avg_f_pd\naxis1 = p, 0, 1, 5\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = f0_ww\naxis1 = k, 0, 1, 5\ns = 0.2\nr = 0.3\n")), ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(kv("quantity = avg_f_pd\naxis1 = q, 0, 1\n")), ParseError);
}

TEST_CASE("sweep of the phase damping average") {
  const auto spec = sweep_spec_from(kv("quantity = avg_f_pd\naxis1 = q, 0, 1, 101\n"));
  const auto t = run_sweep(spec);
  REQUIRE(t.rows.size() == 101);
  CHECK(t.rows.front()[1] == 1.0);
  CHECK(format_real(t.rows.back()[1]) == "0.666666666667");
  CHECK(t.warnings == 0);
}

TEST_CASE("sweep output is identical across worker counts and reruns") {
  const auto spec = sweep_spec_from(kv("quantity = fig3\naxis1 = p, 0.1, 0.9, 7\naxis2 = s, 0, 0.9, 6\n"));
  const auto one = csv(spec, 1);
  CHECK(one == csv(spec, 3));
  CHECK(one == csv(spec, 1));
  CHECK(one.find('\r') == std::string::npos);
  CHECK(one.rfind("# warnings: 0\n") == one.size() - 14);
}

TEST_CASE("sweep row order is outer axis major") {
  const auto spec = sweep_spec_from(kv("quantity = f_pd\naxis1 = k, 0, 1, 2\naxis2 = q, 0, 1, 3\n"));
  const auto t = run_sweep(spec);
  REQUIRE(t.rows.size() == 6);
  CHECK(t.rows[1][0] == 0.0);
  CHECK(t.rows[1][1] == 0.5);
  CHECK(t.rows[3][0] == 1.0);
  CHECK(t.rows[3][1] == 0.0);
}

TEST_CASE("out-of-domain grid points become nan with a warning") {
  const auto spec = sweep_spec_from(kv("quantity = sp2\naxis1 = s, 0, 1, 5\nk = 0.5\nr = opt\np = 0.5\n"));
  const auto t = run_sweep(spec, 2);
  std::ostringstream out;
  write_csv(t, out);
  CHECK(t.warnings == 2);  // s = 0 and s = 1 lie outside the region
  CHECK(out.str().find("0,nan\n") != std::string::npos);
  CHECK(out.str().find("# warnings: 2\n") != std::string::npos);
}

TEST_CASE("figure presets have the documented columns") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"fig1", "q,avg_f_pd"},
      {"fig2", "p,avg_f_ad"},
      {"fig3", "p,s,avg_f_opt0,avg_f_ad"},
      {"fig4", "p,s,prob_succ"},
      {"fig5", "p,r,avg_f1,avg_f_ad,optimal_line"}};
  for (const auto& [name, header] : expected) {
    auto spec = sweep_spec_from(kv("quantity = " + name + "\n"));
    for (auto& a : spec.axes) a.steps = 2;
    const auto text = csv(spec, 1);
    CHECK(text.substr(0, text.find('\n')) == header);
  }
}

TEST_CASE("simulated fidelity sweep") {
  const auto spec = sweep_spec_from(kv("quantity = sim_fidelity\nchannel = adc\naxis1 = strength, 0, 1, 3\n"));
  const auto t = run_sweep(spec);
  CHECK(t.rows[0][1] == doctest::Approx(1.0));
  CHECK(t.rows[1][1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(t.rows[2][1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("validation passes on the standard formulas") {
  const auto rows = run_validation(GridSize::Coarse);
  CHECK(all_passed(rows));
  bool has_spot_check = false;
  for (const auto& r : rows) has_spot_check = has_spot_check || r.name == "wmrqm_pdc_no_gain";
  CHECK(has_spot_check);
}

TEST_CASE("validation catches a perturbed phase damping formula") {
  auto f = FormulaSet::standard();
  f.f_pd = [](double k, double q) { return k * k + 2.0 * (1.0 - q) * k * (1.0 - k) + (1.0 - k) * (1.0 - k); };
  const auto rows = run_validation(GridSize::Coarse, f);
  CHECK_FALSE(all_passed(rows));
  std::ostringstream out;
  print_validation(rows, out);
  for (const auto& r : rows) {
    if (r.name == "f_pd") {
      CHECK_FALSE(r.passed());
    }
  }
  CHECK(out.str().find("FAIL") != std::string::npos);
}

TEST_CASE("validation ignores the tolerance override") {
  setenv("QSS_SIM_TOLERANCE_OVERRIDE", "not-a-number", 1);
  CHECK(all_passed(run_validation(GridSize::Coarse)));
  CHECK_THROWS_AS(tolerance_override_from_env(), ParseError);
  setenv("QSS_SIM_TOLERANCE_OVERRIDE", "1e-6", 1);
  CHECK(tolerance_override_from_env() == 1e-6);
  unsetenv("QSS_SIM_TOLERANCE_OVERRIDE");
  CHECK_FALSE(tolerance_override_from_env().has_value());
}

TEST_CASE("command exit codes") {
  CHECK(run_qss("run --config " + write_file("ok.cfg", "parties = 3\nsecret_k = 0.3\n")) == 0);
  CHECK(run_qss("run --config " + write_file("parse.cfg", "parties three\n")) == 2);
  CHECK(run_qss("run --config " + write_file("invalid.cfg", "parties = 1\nsecret_k = 0.3\n")) == 3);
  CHECK(run_qss("run --config " +
                write_file("domain.cfg", "secret_k = 0.01\nchannel = adc\nstrength = 0.5\nwmrqm = on\n"
                                         "weak_strength = 0.5\nreverse_strength = opt\n")) == 4);
  CHECK(run_qss("run --config /nonexistent/file.cfg") == 2);
  CHECK(run_qss("run") == 2);
  const auto out = (scratch() / "fig1.csv").string();
  CHECK(run_qss("sweep --spec " + write_file("fig1.spec", "quantity = fig1\n") + " --out " + out + " --workers 2") ==
        0);
  CHECK(std::filesystem::file_size(out) > 0);
  CHECK(run_qss("validate --grid coarse") == 0);
  CHECK(run_qss("validate --grid medium") == 2);
}
