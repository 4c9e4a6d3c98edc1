#include "ambit/simulate.hpp"

#include "ambit/csv.hpp"
#include "ambit/errors.hpp"
#include "ambit/geometry.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace ambit {

namespace {

constexpr double pi = std::numbers::pi;

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// grid

int SimulationGrid::z_count() const { return static_cast<int>(std::llround(2.0 * z_range / dz)) + 1; }

std::vector<double> SimulationGrid::output_angles() const {
    std::vector<double> a(H);
    for (int l = 0; l < H; ++l) a[l] = two_pi * (l + 1) / H;
    return a;
}

std::vector<double> SimulationGrid::noise_angles() const {
    std::vector<double> a(M_cells);
    for (int l = 0; l < M_cells; ++l) a[l] = two_pi * (l + 1) / M_cells;
    return a;
}

std::vector<std::string> SimulationGrid::violations(const Kernel* kernel) const {
    std::vector<std::string> v;
    if (!(dt > 0.0)) v.push_back("grid.dt_years must be > 0 (got " + num(dt) + ")");
    if (J < 1) v.push_back("grid.steps must be >= 1 (got " + std::to_string(J) + ")");
    if (H < 1) v.push_back("grid.output_angles must be >= 1 (got " + std::to_string(H) + ")");
    if (M_cells < H) v.push_back("grid.noise_cells must be >= output_angles (got " + std::to_string(M_cells) + ")");
    if (!(dz > 0.0)) v.push_back("grid.contour_step must be > 0 (got " + num(dz) + ")");
    if (!(z_range > 0.0)) v.push_back("grid.contour_range must be > 0 (got " + num(z_range) + ")");
    if (dz > 0.0 && z_range > 0.0 && std::abs(2.0 * z_range / dz - std::round(2.0 * z_range / dz)) > 1e-6)
        v.push_back("grid.contour_range must be a multiple of contour_step / 2");
    if (N < 0) v.push_back("grid.truncation_order must be >= 0 (got " + std::to_string(N) + ")");
    if (!(z_r < 0.0)) v.push_back("grid.contour_abscissa must be < 0 (got " + num(z_r) + ")");
    if (kernel && !(z_r > -kernel->gamma_decay()))
        v.push_back("grid.contour_abscissa must exceed -gamma_decay = " + num(-kernel->gamma_decay()) + " (got " +
                    num(z_r) + ")");
    return v;
}

void SimulationGrid::validate(const Kernel* kernel) const {
    auto v = violations(kernel);
    if (!v.empty()) throw config_error(v);
}

// ---------------------------------------------------------------------------
// volatility

double VolatilityFieldSpec::mean() const {
    return kind == Kind::constant ? value : (delta / gamma) / kappa;
}

double VolatilityFieldSpec::variance() const {
    return kind == Kind::constant ? 0.0 : (delta / (gamma * gamma * gamma)) / (4.0 * pi * kappa);
}

double VolatilityFieldSpec::autocovariance(double lag) const { return variance() * std::exp(-kappa * std::abs(lag)); }

void VolatilityFieldSpec::validate() const {
    std::vector<std::string> v;
    if (kind == Kind::constant) {
        if (!(value > 0.0)) v.push_back("volatility.value must be > 0 (got " + num(value) + ")");
    } else {
        if (!(kappa > 0.0)) v.push_back("volatility.kappa_per_year must be > 0 (got " + num(kappa) + ")");
        if (!(delta > 0.0)) v.push_back("volatility.ig_delta must be > 0 (got " + num(delta) + ")");
        if (!(gamma > 0.0)) v.push_back("volatility.ig_gamma must be > 0 (got " + num(gamma) + ")");
    }
    if (!v.empty()) throw config_error(v);
}

std::vector<double> simulate_volatility_path(const VolatilityFieldSpec& spec, const SimulationGrid& grid, Rng& rng) {
    spec.validate();
    std::vector<double> s(static_cast<std::size_t>(grid.J) + 1, spec.value);
    if (spec.kind == VolatilityFieldSpec::Kind::constant) return s;

    // sigma_t = (1/2pi) int exp(-kappa (t-s)) Lambda(ds), Lambda the circle
    // marginal of the IG basis; each step's shock is weighted by the mean of
    // the exponential over the step.
    const double a = spec.kappa * grid.dt;
    const double decay = std::exp(-a);
    const double weight = (a > 1e-12 ? -std::expm1(-a) / a : 1.0) / two_pi;
    const double d = two_pi * grid.dt * spec.delta;
    const double ig_mean = d / spec.gamma, ig_shape = d * d;

    double x = spec.mean();
    const long burn = static_cast<long>(std::ceil(10.0 / a));
    for (long k = 0; k < burn; ++k) x = decay * x + weight * sample_inverse_gaussian(ig_mean, ig_shape, rng);
    s[0] = x;
    for (int j = 1; j <= grid.J; ++j) {
        x = decay * x + weight * sample_inverse_gaussian(ig_mean, ig_shape, rng);
        s[j] = x;
    }
    return s;
}

std::vector<double> simulate_volatility(const VolatilityFieldSpec& spec, const SimulationGrid& grid, Rng& rng) {
    const auto path = simulate_volatility_path(spec, grid, rng);
    std::vector<double> m(static_cast<std::size_t>(grid.J) * grid.H);
    for (int j = 0; j < grid.J; ++j)
        std::fill_n(m.begin() + static_cast<std::ptrdiff_t>(j) * grid.H, grid.H, path[j + 1]);
    return m;
}

// ---------------------------------------------------------------------------
// noise

NoiseCache::NoiseCache(const SimulationGrid& grid)
    : area_(grid.dt * two_pi / grid.M_cells), angles_(grid.noise_angles()), draws_(grid.M_cells, 0.0) {}

void NoiseCache::draw(const CharacteristicQuadruplet& quad, int step, double sigma, Rng& rng) {
    sample_patches(quad, area_, draws_.size(), draws_.data(), rng);
    if (sigma != 1.0)
        for (double& d : draws_) d *= sigma;
    step_ = step;
}

cplx NoiseCache::harmonic(int n) const {
    cplx acc = 0.0;
    for (std::size_t l = 0; l < draws_.size(); ++l) acc += std::polar(draws_[l], n * angles_[l]);
    return acc;
}

cplx noise_increment(const CharacteristicQuadruplet& quad, const SimulationGrid& grid, int n, int step,
                     NoiseCache& cache, Rng& rng, double sigma) {
    if (cache.cells() != grid.M_cells)
        throw domain_error("noise_increment: cache has " + std::to_string(cache.cells()) + " cells, grid has " +
                           std::to_string(grid.M_cells));
    if (step == cache.step() + 1) {
        cache.draw(quad, step, sigma, rng);
    } else if (step != cache.step()) {
        throw domain_error("noise_increment: step " + std::to_string(step) + " does not follow cached step " +
                           std::to_string(cache.step()));
    }
    return cache.harmonic(n);
}

// ---------------------------------------------------------------------------
// OU lattice

cplx ComplexOUState::at(int n, int k) const {
    const std::size_t i = static_cast<std::size_t>(n) * Z + k;
    return {re[i], im[i]};
}

void ComplexOUState::clear() {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    t = 0.0;
}

double ComplexOUState::conjugate_residual() const {
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < Z; ++k) {
        const cplx a = at(0, k), b = at(0, Z - 1 - k);
        worst = std::max(worst, std::abs(a - std::conj(b)));
        scale = std::max(scale, std::abs(a));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

ContourFactors contour_factors(const SimulationGrid& grid) {
    const int Z = grid.z_count();
    ContourFactors f;
    f.re.resize(Z);
    f.im.resize(Z);
    for (int k = 0; k < Z; ++k) {
        const cplx e = std::exp(cplx(grid.z_r, grid.z_i(k)) * grid.dt);
        f.re[k] = e.real();
        f.im[k] = e.imag();
    }
    return f;
}

void evolve_ou(ComplexOUState& state, const std::vector<cplx>& increments, const ContourFactors& f, double dt) {
    const int Z = state.Z;
    const double* __restrict er = f.re.data();
    const double* __restrict ei = f.im.data();
    for (int n = 0; n <= state.N; ++n) {
        double* __restrict vr = state.re.data() + static_cast<std::size_t>(n) * Z;
        double* __restrict vi = state.im.data() + static_cast<std::size_t>(n) * Z;
        const double dr = increments[n].real(), di = increments[n].imag();
        for (int k = 0; k < Z; ++k) {
            const double ar = vr[k] + dr, ai = vi[k] + di;
            vr[k] = er[k] * ar - ei[k] * ai;
            vi[k] = er[k] * ai + ei[k] * ar;
        }
    }
    state.t += dt;
}

// ---------------------------------------------------------------------------
// reconstruction

ReconstructionTable::ReconstructionTable(const Kernel& kernel, const SimulationGrid& grid, std::vector<double> angles)
    : angles_(std::move(angles)), N_(grid.N), Z_(grid.z_count()) {
    const std::size_t size = angles_.size() * static_cast<std::size_t>(N_ + 1) * Z_;
    cr_.resize(size);
    ci_.resize(size);
    for (std::size_t o = 0; o < angles_.size(); ++o)
        for (int n = 0; n <= N_; ++n) {
            const double mult = (n == 0 ? 1.0 : 2.0) * grid.dz / two_pi;
            for (int k = 0; k < Z_; ++k) {
                const double w = (k == 0 || k == Z_ - 1) ? 0.5 : 1.0;
                const cplx c = w * mult * kernel.laplace_fourier(cplx(grid.z_r, grid.z_i(k)), angles_[o], n);
                const std::size_t i = (o * (N_ + 1) + n) * Z_ + k;
                cr_[i] = c.real();
                ci_[i] = c.imag();
            }
        }
}

void ReconstructionTable::reconstruct(const ComplexOUState& s, double* out, int N_used) const {
    if (s.Z != Z_ || s.N < std::min(N_, N_used < 0 ? N_ : N_used))
        throw domain_error("reconstruct: state shape does not match the reconstruction table");
    const int top = N_used < 0 ? N_ : std::min(N_used, N_);
    for (std::size_t o = 0; o < angles_.size(); ++o) {
        double acc = 0.0;
        for (int n = 0; n <= top; ++n) {
            const std::size_t base = (o * (N_ + 1) + n) * Z_;
            const double* __restrict cr = cr_.data() + base;
            const double* __restrict ci = ci_.data() + base;
            const double* __restrict vr = s.re.data() + static_cast<std::size_t>(n) * Z_;
            const double* __restrict vi = s.im.data() + static_cast<std::size_t>(n) * Z_;
            double part = 0.0;
            for (int k = 0; k < Z_; ++k) part += cr[k] * vr[k] - ci[k] * vi[k];
            acc += part;
        }
        out[o] = acc;
    }
}

ReconstructionTable ReconstructionTable::collapse(const std::vector<double>& weights) const {
    if (weights.size() != angles_.size()) throw domain_error("collapse: one weight per output angle required");
    ReconstructionTable t;
    t.angles_ = {std::numeric_limits<double>::quiet_NaN()};
    t.N_ = N_;
    t.Z_ = Z_;
    const std::size_t row = static_cast<std::size_t>(N_ + 1) * Z_;
    t.cr_.assign(row, 0.0);
    t.ci_.assign(row, 0.0);
    for (std::size_t o = 0; o < angles_.size(); ++o)
        for (std::size_t i = 0; i < row; ++i) {
            t.cr_[i] += weights[o] * cr_[o * row + i];
            t.ci_[i] += weights[o] * ci_[o * row + i];
        }
    return t;
}

double ReconstructionTable::imag_residual(const ComplexOUState& s) const {
    double worst = 0.0;
    for (std::size_t o = 0; o < angles_.size(); ++o) {
        const std::size_t base = (o * (N_ + 1)) * Z_;
        double im = 0.0, scale = 0.0;
        for (int k = 0; k < Z_; ++k) {
            const double cr = cr_[base + k], ci = ci_[base + k], vr = s.re[k], vi = s.im[k];
            im += cr * vi + ci * vr;
            scale += std::hypot(cr, ci) * std::hypot(vr, vi);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(im) / scale);
    }
    return worst;
}

std::vector<double> reconstruct_field(const ComplexOUState& state, const Kernel& kernel, const SimulationGrid& grid) {
    ReconstructionTable table(kernel, grid, grid.output_angles());
    std::vector<double> out(grid.H);
    table.reconstruct(state, out.data());
    return out;
}

// ---------------------------------------------------------------------------
// simulator

FieldSimulator::FieldSimulator(KernelPtr kernel, CharacteristicQuadruplet quad, VolatilityFieldSpec vol,
                               SimulationGrid grid, std::vector<double> angles)
    : kernel_((grid.validate(kernel.get()), std::move(kernel))),
      quad_(std::move(quad)),
      vol_(vol),
      grid_(grid),
      table_(*kernel_, grid_, angles.empty() ? grid_.output_angles() : std::move(angles)),
      factors_(contour_factors(grid_)),
      state_(grid_.N, grid_.z_count()),
      cache_(grid_) {
    validate(quad_.seed);
    vol_.validate();
    const auto h = grid_.noise_angles();
    const int M = grid_.M_cells;
    cos_nh_.resize(static_cast<std::size_t>(grid_.N + 1) * M);
    sin_nh_.resize(cos_nh_.size());
    for (int n = 0; n <= grid_.N; ++n)
        for (int l = 0; l < M; ++l) {
            cos_nh_[static_cast<std::size_t>(n) * M + l] = std::cos(n * h[l]);
            sin_nh_[static_cast<std::size_t>(n) * M + l] = std::sin(n * h[l]);
        }
    incr_.assign(grid_.N + 1, 0.0);
    reset(0);
}

void FieldSimulator::reset(std::uint64_t path) {
    state_.clear();
    j_ = 0;
    noise_rng_ = make_stream(grid_.seed, 0, path);
    Rng vol_rng = make_stream(grid_.seed, 1, path);
    vol_path_ = simulate_volatility_path(vol_, grid_, vol_rng);
    cache_ = NoiseCache(grid_);
}

void FieldSimulator::step() {
    if (j_ >= grid_.J) throw domain_error("FieldSimulator: stepped past the grid horizon");
    // left-endpoint volatility over [t_j, t_{j+1}]
    cache_.draw(quad_, j_ + 1, vol_path_[j_], noise_rng_);
    const auto& d = cache_.draws();
    const int M = grid_.M_cells;
    for (int n = 0; n <= grid_.N; ++n) {
        double r = 0.0, i = 0.0;
        const double* c = cos_nh_.data() + static_cast<std::size_t>(n) * M;
        const double* s = sin_nh_.data() + static_cast<std::size_t>(n) * M;
        for (int l = 0; l < M; ++l) {
            r += c[l] * d[l];
            i += s[l] * d[l];
        }
        incr_[n] = {r, i};
    }
    evolve_ou(state_, incr_, factors_, grid_.dt);
    ++j_;
}

FieldPath simulate_field(KernelPtr kernel, const CharacteristicQuadruplet& quad, const VolatilityFieldSpec& vol,
                         const SimulationGrid& grid) {
    FieldSimulator sim(std::move(kernel), quad, vol, grid);
    FieldPath fp;
    fp.grid = grid;
    fp.angles = sim.angles();
    const std::size_t H = fp.angles.size();
    fp.values.resize(static_cast<std::size_t>(grid.J) * H);
    fp.times.resize(grid.J);
    const bool stochastic = vol.kind == VolatilityFieldSpec::Kind::exp_ig;
    if (stochastic) fp.volatility.resize(fp.values.size());
    for (int j = 0; j < grid.J; ++j) {
        sim.step();
        fp.times[j] = grid.dt * (j + 1);
        sim.reconstruct(fp.values.data() + j * H);
        fp.max_imag_residual = std::max(fp.max_imag_residual, sim.imag_residual());
        if (stochastic) std::fill_n(fp.volatility.begin() + static_cast<std::ptrdiff_t>(j * H), H, sim.sigma());
    }
    for (double v : fp.values)
        if (!std::isfinite(v)) throw numerical_error("simulate_field: non-finite field value");
    return fp;
}

// ---------------------------------------------------------------------------
// truncation bound

TruncationBound truncation_error_bound(const Kernel& kernel, const CharacteristicQuadruplet& quad, double k_sigma,
                                       double z_r, int N, const std::vector<double>& angles) {
    validate(quad.seed);
    if (!quad.centered()) throw domain_error("truncation_error_bound: the Levy seed must be centered");
    if (!(z_r < 0.0 && z_r > -kernel.gamma_decay()))
        throw domain_error("truncation_error_bound: z_r must lie in (-gamma_decay, 0), got " + num(z_r));
    if (!(k_sigma > 0.0)) throw domain_error("truncation_error_bound: k_sigma must be > 0");
    if (N < 0) throw domain_error("truncation_error_bound: N must be >= 0");

    TruncationBound tb;
    tb.angles = angles;
    tb.per_angle.assign(angles.size(), 0.0);
    const double pref = quad.variance() * k_sigma / (8.0 * pi * pi * std::abs(z_r));

    for (std::size_t o = 0; o < angles.size(); ++o) {
        const double h = angles[o];
        double sum = 0.0;
        for (int m = N + 1; m <= kernel.fourier_order(); ++m)
            for (int n : {m, -m}) {
                auto mag = [&](double y) {
                    return std::abs(kernel.laplace_fourier({z_r, y}, h, n)) +
                           std::abs(kernel.laplace_fourier({z_r, -y}, h, n));
                };
                const double a1 = mag(1e4), a2 = mag(1e5);
                if (a1 == 0.0 && a2 == 0.0) continue;
                const double decay = std::log10(a1 / a2);
                if (!(decay > 1.01))
                    throw domain_error("truncation_error_bound: contour integral diverges for n = " +
                                       std::to_string(n) + " (|Kh| ~ |z|^-" + num(decay) + ")");
                boost::math::quadrature::exp_sinh<double> es;
                const double I = es.integrate(mag, 0.0, std::numeric_limits<double>::infinity());
                if (!std::isfinite(I)) throw numerical_error("truncation_error_bound: quadrature failed");
                sum += I * I;
            }
        tb.per_angle[o] = pref * sum;
    }
    tb.max = tb.per_angle.empty() ? 0.0 : *std::max_element(tb.per_angle.begin(), tb.per_angle.end());
    return tb;
}

// ---------------------------------------------------------------------------

void run_paths(std::size_t paths, int threads, const std::function<void(std::size_t, int)>& body) {
    const int T = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(paths, 1))));
    if (T == 1) {
        for (std::size_t p = 0; p < paths; ++p) body(p, 0);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < T; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t p = w; p < paths; p += T) body(p, w);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

namespace {

CsvTable field_table(const FieldPath& f, const std::vector<double>& data) {
    CsvTable t;
    t.header.push_back("t");
    for (std::size_t l = 0; l < f.angles.size(); ++l) t.header.push_back("theta_" + std::to_string(l + 1));
    for (std::size_t j = 0; j < f.times.size(); ++j) {
        std::vector<std::string> row{format_double(f.times[j])};
        for (std::size_t l = 0; l < f.angles.size(); ++l) row.push_back(format_double(data[j * f.angles.size() + l]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

void write_field_csv(const std::string& path, const FieldPath& field) { write_csv(path, field_table(field, field.values)); }

void write_volatility_csv(const std::string& path, const FieldPath& field) {
    if (field.volatility.empty()) throw domain_error("write_volatility_csv: path has no volatility field");
    write_csv(path, field_table(field, field.volatility));
}

}  // namespace ambit
