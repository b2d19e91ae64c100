#include "enf/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "enf/error.hpp"

namespace enf::fft {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const noexcept { fftw_destroy_plan(plan); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW's planner is not thread-safe; execution with the new-array interface
// is. Plans are created once per length under the lock and never destroyed
// while the process runs.
class PlanCache {
 public:
  fftw_plan get(std::size_t length) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(length);
    if (it != plans_.end()) return it->second.get();
    std::vector<double> in(length);
    std::vector<fftw_complex> out(length / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), in.data(),
                                          out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fftw: could not create plan");
    return plans_.emplace(length, PlanHandle(plan)).first->second.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanHandle> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

std::vector<std::complex<double>> real_forward(std::span<const double> input,
                                               std::size_t length) {
  if (length == 0) throw InvalidArgument("fft length must be positive");
  fftw_plan plan = cache().get(length);
  std::vector<double> in(length, 0.0);
  std::copy_n(input.begin(), std::min(input.size(), length), in.begin());
  std::vector<std::complex<double>> out(length / 2 + 1);
  fftw_execute_dft_r2c(plan, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace enf::fft
