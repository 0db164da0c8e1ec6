// Serial reference vs OpenMP drivers on the bundled ERK model.
//   bench_sweeps [data_dir] [samples] [grid_points]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "crnrobust/robust.hpp"

using namespace crnrobust;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : CRN_DATA_DIR;
    const std::size_t samples = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 64;
    const std::size_t points = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 20;

    const auto net = load_network(dir + "/erk.json");
    std::printf("threads: %d\n", omp_get_max_threads());

    RobustnessQuery rq;
    rq.network = net;
    rq.marking = IntervalMarking::from_network(net);
    rq.formula = parse_formula("F(G([PPMek1] >= 0.999 & [PPMek1] <= 1))");
    rq.samples = samples;
    rq.seed = 42;
    rq.sim = SimOptions::for_horizon(500, 501);

    RobustnessReport rs, rp;
    const double ts = time_ms([&] { rs = serial::estimate_robustness(rq); });
    const double tp = time_ms([&] { rp = estimate_robustness(rq); });
    std::printf("robustness  n=%zu  serial %9.1f ms  parallel %9.1f ms  speedup %.2f  identical %s\n", samples, ts,
                tp, ts / tp, rs == rp ? "yes" : "NO");

    AlphaQuery aq;
    aq.network = net;
    aq.marking = rq.marking;
    aq.output = "PPMek1";
    aq.alpha = 0.1;
    aq.strategy = GridStrategy{points};
    aq.sim = SimOptions::for_horizon(500, 501);

    AlphaReport as, ap;
    const double gs = time_ms([&] { as = serial::check_alpha_robustness(aq); });
    const double gp = time_ms([&] { ap = check_alpha_robustness(aq); });
    std::printf("alpha grid  n=%zu  serial %9.1f ms  parallel %9.1f ms  speedup %.2f  identical %s\n", points, gs, gp,
                gs / gp, as == ap ? "yes" : "NO");
    return rs == rp && as == ap ? 0 : 1;
}
