#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace hnls::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // In-place plan on a scratch array; FFTW_UNALIGNED lets it run on any
    // std::complex buffer through fftw_execute_dft.
    fftw_complex* scratch = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<Complex> data, int sign) {
  const int n = static_cast<int>(data.size());
  fftw_plan plan = cache().get(n, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void fft_forward(std::span<Complex> data) { execute(data, FFTW_FORWARD); }
void fft_backward(std::span<Complex> data) { execute(data, FFTW_BACKWARD); }

}  // namespace hnls::detail
