#pragma once

#include "ambit/kernels.hpp"
#include "ambit/levy.hpp"
#include "ambit/random.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ambit {

// Time, angle and contour discretization. Output angles are 2 pi l / H and
// noise cells are ((l-1), l] * 2 pi / M_cells, both for l = 1.. .
struct SimulationGrid {
    double dt = 0.005;
    int J = 1000;
    int H = 24;
    int M_cells = 48;
    double z_r = -0.5;
    double z_range = 50.0;
    double dz = 0.1;
    int N = 1;
    std::uint64_t seed = 0;

    int z_count() const;
    double z_i(int k) const { return -z_range + k * dz; }
    double horizon() const { return dt * J; }
    std::vector<double> output_angles() const;
    std::vector<double> noise_angles() const;

    std::vector<std::string> violations(const Kernel* kernel = nullptr) const;
    void validate(const Kernel* kernel = nullptr) const;
};

struct VolatilityFieldSpec {
    enum class Kind { constant, exp_ig };

    Kind kind = Kind::constant;
    double value = 1.0;
    double kappa = 1.0;
    double delta = 4.0;  // IG seed of the volatility basis
    double gamma = 4.0;

    static VolatilityFieldSpec constant(double v) { return {Kind::constant, v}; }
    static VolatilityFieldSpec exp_ig(double kappa, double delta, double gamma) {
        return {Kind::exp_ig, 1.0, kappa, delta, gamma};
    }

    double mean() const;
    double variance() const;
    double second_moment() const { return variance() + mean() * mean(); }
    // Cov(sigma_s, sigma_{s+lag}); zero for a constant field.
    double autocovariance(double lag) const;
    void validate() const;
};

// Spatially uniform volatility on t_0..t_J (J+1 values), started from a
// pre-run of at least 10/kappa years begun at the stationary mean.
std::vector<double> simulate_volatility_path(const VolatilityFieldSpec& spec, const SimulationGrid& grid, Rng& rng);

// The same as a J x H matrix (rows t_1..t_J), row-major.
std::vector<double> simulate_volatility(const VolatilityFieldSpec& spec, const SimulationGrid& grid, Rng& rng);

// Cell draws for one time step shared by every harmonic.
class NoiseCache {
public:
    explicit NoiseCache(const SimulationGrid& grid);

    // Draws the cells of step j (1-based) with volatility sigma.
    void draw(const CharacteristicQuadruplet& quad, int step, double sigma, Rng& rng);
    int step() const { return step_; }
    int cells() const { return static_cast<int>(draws_.size()); }
    const std::vector<double>& draws() const { return draws_; }
    // sum_l exp(i n h_l) * sigma * dL_l
    cplx harmonic(int n) const;

private:
    double area_;
    std::vector<double> angles_;
    std::vector<double> draws_;
    int step_ = 0;
};

// Increment L_n(t_j) - L_n(t_{j-1}); draws the step into the cache when needed.
cplx noise_increment(const CharacteristicQuadruplet& quad, const SimulationGrid& grid, int n, int step,
                     NoiseCache& cache, Rng& rng, double sigma = 1.0);

// V_n(t, z_r + i z_k) for n = 0..N in structure-of-arrays form. Negative
// harmonics are implied by V_{-n}(t, conj z) = conj V_n(t, z), which holds
// exactly because the driving noise is real.
struct ComplexOUState {
    int N = 0;
    int Z = 0;
    std::vector<double> re;
    std::vector<double> im;
    double t = 0.0;

    ComplexOUState() = default;
    ComplexOUState(int N_, int Z_) : N(N_), Z(Z_), re(static_cast<std::size_t>(N_ + 1) * Z_), im(re.size()) {}

    cplx at(int n, int k) const;
    void clear();
    // max |V_0(z_k) - conj V_0(z_{Z-1-k})|, relative to max |V_0|
    double conjugate_residual() const;
};

// exp(z dt) for each contour node.
struct ContourFactors {
    std::vector<double> re;
    std::vector<double> im;
};
ContourFactors contour_factors(const SimulationGrid& grid);

// V <- exp(z dt) (V + dL_n), with increments[n] for n = 0..N.
void evolve_ou(ComplexOUState& state, const std::vector<cplx>& increments, const ContourFactors& f, double dt);

// Precomputed w_k Kh(z_k, theta_o, n) dz / (2 pi) for every output angle.
class ReconstructionTable {
public:
    ReconstructionTable(const Kernel& kernel, const SimulationGrid& grid, std::vector<double> angles);

    int angles() const { return static_cast<int>(angles_.size()); }
    const std::vector<double>& angle_values() const { return angles_; }
    int N() const { return N_; }

    // Re of the truncated Bromwich sum for harmonics |n| <= N_used.
    void reconstruct(const ComplexOUState& s, double* out, int N_used = -1) const;
    // Single-row table for the linear functional sum_o w_o Y(theta_o).
    ReconstructionTable collapse(const std::vector<double>& weights) const;

    // |Im| of the n = 0 contour sum relative to its absolute size, max over angles.
    double imag_residual(const ComplexOUState& s) const;

private:
    ReconstructionTable() = default;

    std::vector<double> angles_;
    int N_;
    int Z_;
    std::vector<double> cr_, ci_;  // [(o * (N+1) + n) * Z + k]
};

// Field values at the output angles, convenience wrapper over ReconstructionTable.
std::vector<double> reconstruct_field(const ComplexOUState& state, const Kernel& kernel, const SimulationGrid& grid);

struct FieldPath {
    SimulationGrid grid;
    std::vector<double> times;   // t_1..t_J
    std::vector<double> angles;  // output angles
    std::vector<double> values;  // J x H row-major
    std::vector<double> volatility;
    double max_imag_residual = 0.0;

    double at(int j, int l) const { return values[static_cast<std::size_t>(j) * angles.size() + l]; }
};

// One path stepped forward in time. Path p of a run uses the substreams
// (seed, 0, p) for noise and (seed, 1, p) for volatility.
class FieldSimulator {
public:
    FieldSimulator(KernelPtr kernel, CharacteristicQuadruplet quad, VolatilityFieldSpec vol, SimulationGrid grid,
                   std::vector<double> angles = {});

    void reset(std::uint64_t path);
    void step();
    void reconstruct(double* out, int N_used = -1) const { table_.reconstruct(state_, out, N_used); }
    double imag_residual() const { return table_.imag_residual(state_); }

    int step_index() const { return j_; }
    double time() const { return state_.t; }
    double sigma() const { return vol_path_[j_]; }
    const ComplexOUState& state() const { return state_; }
    const SimulationGrid& grid() const { return grid_; }
    const std::vector<double>& angles() const { return table_.angle_values(); }
    const Kernel& kernel() const { return *kernel_; }
    const ReconstructionTable& table() const { return table_; }

private:
    KernelPtr kernel_;
    CharacteristicQuadruplet quad_;
    VolatilityFieldSpec vol_;
    SimulationGrid grid_;
    ReconstructionTable table_;
    ContourFactors factors_;
    ComplexOUState state_;
    NoiseCache cache_;
    Rng noise_rng_;
    std::vector<double> vol_path_;
    std::vector<double> cos_nh_, sin_nh_;  // [n * M + l]
    std::vector<cplx> incr_;
    int j_ = 0;
};

FieldPath simulate_field(KernelPtr kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                         const SimulationGrid& grid);

struct TruncationBound {
    std::vector<double> angles;
    std::vector<double> per_angle;
    double max = 0.0;
};

// V[L'] k_sigma / (8 pi^2 |z_r|) * sum_{|n| > N} (int |Kh(z_r + i y, h, n)| dy)^2
TruncationBound truncation_error_bound(const Kernel& kernel, const CharacteristicQuadruplet& quad, double k_sigma,
                                       double z_r, int N, const std::vector<double>& angles);

// Runs body(path, worker) for path = 0..paths-1 on `threads` workers.
// Paths are handed out in a fixed interleaving so results can be stored by index.
void run_paths(std::size_t paths, int threads, const std::function<void(std::size_t, int)>& body);

void write_field_csv(const std::string& path, const FieldPath& field);
void write_volatility_csv(const std::string& path, const FieldPath& field);

}  // namespace ambit
