// Golden-file coverage for every CLI subcommand: deterministic output,
// byte-compared against the checked-in expectations.
//
// Usage: test_cli_golden <cli-binary> <golden-dir>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int g_failures = 0;

std::string run(const std::string& command, int* exit_code) {
  std::string full = command + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) {
    std::cerr << "FAIL: cannot spawn: " << command << "\n";
    ++g_failures;
    *exit_code = -1;
    return "";
  }
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int rc = pclose(pipe);
  *exit_code = WEXITSTATUS(rc);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return "<missing golden file: " + path + ">";
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void golden(const std::string& name, const std::string& command, const std::string& golden_dir) {
  int rc = 0;
  std::string got = run(command, &rc);
  if (rc != 0) {
    std::cerr << "FAIL " << name << ": exit " << rc << "\n";
    ++g_failures;
    return;
  }
  std::string want = slurp(golden_dir + "/" + name + ".golden");
  if (got != want) {
    std::cerr << "FAIL " << name << ": output differs\n--- got ---\n" << got
              << "--- want ---\n" << want << "---\n";
    ++g_failures;
    return;
  }
  std::cout << "ok " << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: test_cli_golden <cli> <golden-dir>\n";
    return 2;
  }
  std::string cli = argv[1];
  std::string dir = argv[2];

  golden("space_describe", cli + " space describe --space segments --points 6", dir);
  golden("space_diagram", cli + " space diagram --space cantor_standard --count 8", dir);
  golden("algebra_induce", cli + " algebra induce --space unit_interval", dir);
  golden("algebra_norm", cli + " algebra norm --space segments --poly 1/1*x1 --prec 6", dir);
  golden("algebra_norm_ind",
         cli + " algebra norm --space segments --poly 1/1*x1 --prec 6 --indicator 1", dir);
  golden("algebra_diagram", cli + " algebra diagram --space unit_interval --count 8", dir);
  golden("eval",
         cli + " eval --space unit_interval --poly \"1/1*x1*x1 - 1/1*x0\" --point " + dir +
             "/half.json --prec 8",
         dir);
  golden("compose",
         cli + " compose --space0 unit_interval --space1 unit_interval --psi one_minus_x "
               "--poly 1/1*x1 --prec 3",
         dir);
  golden("translate",
         cli + " translate --fixture permuted_unit_interval --space unit_interval "
               "--vector unit --prec 3",
         dir);
  golden("banach_stone",
         cli + " banach-stone --space0 unit_interval --space1 unit_interval "
               "--psi one_minus_x --point " + dir + "/quarter.json --prec 4",
         dir);
  golden("cantor_homeo", cli + " cantor-homeo --space cantor_variant --depth 2", dir);
  golden("accept9", cli + " accept --criteria 9", dir);

  // Determinism: identical invocations produce byte-identical output.
  {
    int rc1 = 0, rc2 = 0;
    std::string a = run(cli + " space diagram --space unit_interval --count 24", &rc1);
    std::string b = run(cli + " space diagram --space unit_interval --count 24", &rc2);
    if (a != b || rc1 != 0 || rc2 != 0) {
      std::cerr << "FAIL determinism\n";
      ++g_failures;
    } else {
      std::cout << "ok determinism\n";
    }
  }

  // Empty diagram budget: no output, clean exit.
  {
    int rc = 0;
    std::string out = run(cli + " space diagram --space cantor_standard --count 0", &rc);
    if (rc != 0 || !out.empty()) {
      std::cerr << "FAIL empty_budget\n";
      ++g_failures;
    } else {
      std::cout << "ok empty_budget\n";
    }
  }

  // The unit-name refusal is a structured error with a dedicated exit code.
  {
    int rc = 0;
    std::string err = run("( " + cli + " translate --manifest " + dir +
                              "/missing_unit.json --space unit_interval --vector unit "
                              "--prec 2 2>&1 1>/dev/null )",
                          &rc);
    bool code_ok = rc == 2 + 3;  // bad-manifest
    bool text_ok = err.find("\"error\":\"bad-manifest\"") != std::string::npos &&
                   err.find("unit name") != std::string::npos;
    if (!code_ok || !text_ok) {
      std::cerr << "FAIL unit_refusal: exit " << rc << " stderr " << err << "\n";
      ++g_failures;
    } else {
      std::cout << "ok unit_refusal\n";
    }
  }

  if (g_failures) {
    std::cerr << g_failures << " golden failures\n";
    return 1;
  }
  std::cout << "all golden checks passed\n";
  return 0;
}
