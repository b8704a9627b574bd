#ifndef CBC_CPU_TIMER_H_
#define CBC_CPU_TIMER_H_

#include <ctime>

namespace cbc {

// Process CPU time in milliseconds (all threads).
inline double process_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

class CpuTimer {
 public:
  CpuTimer() : start_(process_cpu_ms()) {}
  double elapsed_ms() const { return process_cpu_ms() - start_; }

 private:
  double start_;
};

}  // namespace cbc

#endif  // CBC_CPU_TIMER_H_
