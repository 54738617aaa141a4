// scratch probe: filter PR + zero-pad LU invertibility (not part of the build)
#include <cstdio>
#include <random>
#include <vector>

#include "anisowave/filters.hpp"

using namespace anisowave;

int main() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto [L, Ld] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {4, 4}, {1, 3}, {3, 1},
                                                         {2, 4}, {3, 3}}) {
        auto bank = make_spline_filters(L, Ld);
        std::printf("bank %s: alow %zu ahigh %zu slow %zu shigh %zu radius %d\n",
                    bank.name.c_str(), bank.analysis_low.w.size(), bank.analysis_high.w.size(),
                    bank.synthesis_low.w.size(), bank.synthesis_high.w.size(),
                    bank.support_radius);
        for (Boundary mode : {Boundary::zero_pad, Boundary::periodic}) {
            double worst = 0;
            for (std::size_t n : {8ul, 9ul, 16ul, 33ul, 64ul, 512ul}) {
                if (mode == Boundary::periodic && n % 2) continue;
                if (n < bank.analysis_low.w.size()) continue;
                std::vector<double> x(n);
                for (auto& v : x) v = u(rng);
                std::vector<double> a, d;
                analysis_step(x, bank, mode, a, d);
                auto y = synthesis_step(a, d, bank, mode);
                double err = 0, scale = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    err = std::max(err, std::abs(y[i] - x[i]));
                    scale = std::max(scale, std::abs(x[i]));
                }
                worst = std::max(worst, err / scale);
            }
            std::printf("  mode %d worst rel err %.3e\n", static_cast<int>(mode), worst);
        }
        std::printf("  moment defect deg L-1: %.3e, deg L: %.3e\n",
                    vanishing_moment_defect(bank, L - 1), vanishing_moment_defect(bank, L));
    }
    return 0;
}
