#include "orlicz/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "orlicz/rng.hpp"

namespace orlicz {

Trajectory Trajectory::zero(double period, std::size_t n, int dim) {
    if (n < 4) throw std::invalid_argument("Trajectory: need at least 4 nodes");
    Trajectory u;
    u.period = period;
    u.n = n;
    u.dim = dim;
    u.values.assign(n * dim, 0.0);
    return u;
}

Trajectory Trajectory::from_function(double period, std::size_t n, int dim,
                                     const std::function<Vec(double)>& f) {
    Trajectory u = zero(period, n, dim);
    for (std::size_t i = 0; i < n; ++i) u.set_node(i, f(u.t(i)));
    return u;
}

Trajectory Trajectory::from_trig(const TrigPoly& p, std::size_t n) {
    return from_function(p.period, n, static_cast<int>(p.dim()),
                         [&](double t) { return p.eval(t); });
}

Trajectory derivative(const Trajectory& u) {
    Trajectory d = Trajectory::zero(u.period, u.n, u.dim);
    d.tag = DerivKind::Staggered;
    const double scale = static_cast<double>(u.n) / u.period;
    for (std::size_t i = 0; i < u.n; ++i) {
        const std::size_t j = (i + 1) % u.n;
        for (int k = 0; k < u.dim; ++k)
            d.values[i * u.dim + k] = (u.values[j * u.dim + k] - u.values[i * u.dim + k]) * scale;
    }
    return d;
}

std::pair<Vec, Trajectory> mean_decompose(const Trajectory& u) {
    Vec mean(u.dim, 0.0);
    for (std::size_t i = 0; i < u.n; ++i)
        for (int k = 0; k < u.dim; ++k) mean[k] += u.values[i * u.dim + k];
    for (auto& m : mean) m /= static_cast<double>(u.n);
    Trajectory tilde = u;
    for (std::size_t i = 0; i < u.n; ++i)
        for (int k = 0; k < u.dim; ++k) tilde.values[i * u.dim + k] -= mean[k];
    return {mean, tilde};
}

Trajectory random_bandlimited(double period, std::size_t n, int dim, int harmonics,
                              double sigma, std::uint64_t seed) {
    Rng rng(seed);
    TrigPoly p;
    p.period = period;
    p.a0.assign(dim, 0.0);
    p.a.assign(dim, std::vector<double>(harmonics, 0.0));
    p.b.assign(dim, std::vector<double>(harmonics, 0.0));
    for (int k = 0; k < dim; ++k) {
        p.a0[k] = sigma * rng.normal();
        for (int j = 0; j < harmonics; ++j) {
            const double decay = 1.0 / static_cast<double>(j + 1);
            p.a[k][j] = sigma * decay * rng.normal();
            p.b[k][j] = sigma * decay * rng.normal();
        }
    }
    return Trajectory::from_trig(p, n);
}

void write_csv(const Trajectory& u, std::ostream& os) {
    os << "t";
    for (int k = 1; k <= u.dim; ++k) os << ",u" << k;
    os << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < u.n; ++i) {
        os << u.t(i);
        for (int k = 0; k < u.dim; ++k) os << "," << u.values[i * u.dim + k];
        os << "\n";
    }
}

std::string to_csv(const Trajectory& u) {
    std::ostringstream os;
    write_csv(u, os);
    return os.str();
}

Trajectory read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trajectory csv: empty input");
    int dim = 0;
    for (char c : line)
        if (c == ',') ++dim;
    if (dim < 1) throw std::runtime_error("trajectory csv: header must be t,u1,...,ud");

    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int col = 0;
        while (std::getline(row, cell, ',')) {
            const double v = std::stod(cell);
            if (col == 0)
                times.push_back(v);
            else
                values.push_back(v);
            ++col;
        }
        if (col != dim + 1) throw std::runtime_error("trajectory csv: ragged row");
    }
    if (times.size() < 4) throw std::runtime_error("trajectory csv: need at least 4 nodes");

    const std::size_t n = times.size();
    const double dt = times[1] - times[0];
    Trajectory u;
    u.period = dt * static_cast<double>(n);
    u.n = n;
    u.dim = dim;
    u.values = std::move(values);
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(times[i] - u.t(i)) > 1e-9 * u.period)
            throw std::runtime_error("trajectory csv: nodes must sit on a uniform grid");
    return u;
}

Trajectory trajectory_from_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open trajectory csv: " + path);
    return read_csv(f);
}

void trajectory_to_csv_file(const Trajectory& u, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write trajectory csv: " + path);
    write_csv(u, f);
}

} // namespace orlicz
