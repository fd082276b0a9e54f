// Runs the three reference CLI invocations twice each and compares the bytes
// against the stored golden outputs. Usage: cli_golden_runner <cli> <golden-dir>.

#include <cstdio>
#include <string>
#include <vector>

namespace {

std::string run_capture(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return out;
  }
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  *exit_code = pclose(pipe);
  return out;
}

std::string slurp(const std::string& path) {
  FILE* f = fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  fclose(f);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_golden_runner <cli> <golden-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const std::string golden = argv[2];
  const std::vector<std::pair<std::string, std::string>> cases = {
      {" norm gauss --element " + golden + "/inputs/gauss_element.json --rho 0,0",
       golden + "/expected/norm_gauss.json"},
      {" --seed 7 scatter factorize --g0 " + golden + "/inputs/factorize_g0.json --ginf " +
           golden + "/inputs/factorize_ginf.json --order 6",
       golden + "/expected/scatter_factorize.json"},
      {" k3 verify --chart 1 --order 8", golden + "/expected/k3_verify.json"},
  };
  int failures = 0;
  for (const auto& [args, expected_path] : cases) {
    int code1 = 0, code2 = 0;
    const std::string run1 = run_capture(cli + args, &code1);
    const std::string run2 = run_capture(cli + args, &code2);
    const std::string expected = slurp(expected_path);
    if (code1 != 0 || code2 != 0) {
      std::fprintf(stderr, "FAIL (exit code): %s\n", args.c_str());
      ++failures;
    } else if (run1 != run2) {
      std::fprintf(stderr, "FAIL (nondeterministic): %s\n", args.c_str());
      ++failures;
    } else if (expected.empty() || run1 != expected) {
      std::fprintf(stderr, "FAIL (golden mismatch): %s\n", args.c_str());
      ++failures;
    } else {
      std::printf("ok: %s\n", args.c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
