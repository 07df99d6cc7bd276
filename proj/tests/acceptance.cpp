#include <cstdio>

#include "replab/verify.hpp"

#ifndef REPLAB_DATA_DIR
#define REPLAB_DATA_DIR "data"
#endif

int main() {
  replab::VerifyOptions opt;
  opt.data_dir = REPLAB_DATA_DIR;
  opt.on_result = [](const replab::CriterionResult& r) {
    std::printf("criterion %2d %s %-44s (%.1fs)%s%s\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds,
                r.detail.empty() ? "" : " -- ", r.detail.c_str());
    std::fflush(stdout);
  };
  auto results = replab::run_acceptance(opt);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%d/%d criteria passed\n", static_cast<int>(results.size()) - failed,
              static_cast<int>(results.size()));
  return failed ? 1 : 0;
}
