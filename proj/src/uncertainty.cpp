#include "rtnep/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bigcount.hpp"
#include "json.hpp"

namespace rtnep {

namespace {

using detail::BigCount;
using detail::binomial_sum;

uint64_t bounded_rand(std::mt19937_64& rng, uint64_t n) {
    // unbiased rejection sampling
    uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

}  // namespace

void check_budgets(const GridCase& c, const Budgets& b) {
    if (b.gamma_d < 0 || b.gamma_d > static_cast<int>(c.loads.size()))
        throw std::invalid_argument("gamma_d outside [0, number of loads]");
    if (b.gamma_g < 0 || b.gamma_g > static_cast<int>(c.generators.size()))
        throw std::invalid_argument("gamma_g outside [0, number of units]");
}

Realization realize(const GridCase& c, const std::vector<uint8_t>& z_d,
                    const std::vector<uint8_t>& z_g, const Budgets& b) {
    check_budgets(c, b);
    if (z_d.size() != c.loads.size() || z_g.size() != c.generators.size())
        throw std::invalid_argument("z vectors must be sized to loads/units");
    long sd = 0, sg = 0;
    for (size_t j = 0; j < z_d.size(); ++j) {
        if (z_d[j] > 1) throw std::invalid_argument("z_d entries must be 0 or 1");
        if (z_d[j] && c.loads[j].demand_deviation <= 0.0)
            throw std::invalid_argument("load " + std::to_string(c.loads[j].id) +
                                        " has zero deviation; its z is fixed at 0");
        sd += z_d[j];
    }
    for (size_t i = 0; i < z_g.size(); ++i) {
        if (z_g[i] > 1) throw std::invalid_argument("z_g entries must be 0 or 1");
        if (z_g[i] && c.generators[i].capacity_deviation <= 0.0)
            throw std::invalid_argument("unit " + std::to_string(c.generators[i].id) +
                                        " has zero deviation; its z is fixed at 0");
        sg += z_g[i];
    }
    if (sd > b.gamma_d)
        throw BudgetViolationError("gamma_d", "sum(z_d) = " + std::to_string(sd) +
                                                  " exceeds gamma_d = " + std::to_string(b.gamma_d));
    if (sg > b.gamma_g)
        throw BudgetViolationError("gamma_g", "sum(z_g) = " + std::to_string(sg) +
                                                  " exceeds gamma_g = " + std::to_string(b.gamma_g));

    Realization r;
    r.z_d = z_d;
    r.z_g = z_g;
    r.demand.resize(c.loads.size());
    r.capacity.resize(c.generators.size());
    for (size_t j = 0; j < c.loads.size(); ++j)
        r.demand[j] = c.loads[j].nominal_demand + c.loads[j].demand_deviation * z_d[j];
    for (size_t i = 0; i < c.generators.size(); ++i)
        r.capacity[i] = c.generators[i].nominal_capacity - c.generators[i].capacity_deviation * z_g[i];
    return r;
}

Realization nominal_realization(const GridCase& c) {
    return realize(c, std::vector<uint8_t>(c.loads.size(), 0),
                   std::vector<uint8_t>(c.generators.size(), 0), Budgets{0, 0});
}

bool VertexCount::exceeds(unsigned long long cap) const {
    return clamped > cap;
}

VertexCount count_vertices(const GridCase& c, const Budgets& b) {
    int nd = static_cast<int>(c.uncertain_loads.size());
    int ng = static_cast<int>(c.uncertain_gens.size());
    BigCount total = binomial_sum(nd, std::min(b.gamma_d, nd));
    BigCount gside = binomial_sum(ng, std::min(b.gamma_g, ng));
    total.mul(gside);
    VertexCount out;
    out.decimal = total.str();
    if (!total.fits_u64(out.clamped)) out.clamped = std::numeric_limits<unsigned long long>::max();
    return out;
}

void enumerate_vertices(const GridCase& c, const Budgets& b, unsigned long long cap,
                        const std::function<void(const Realization&)>& emit) {
    check_budgets(c, b);
    VertexCount count = count_vertices(c, b);
    if (count.exceeds(cap))
        throw CapExceededError(count.decimal, "vertex count " + count.decimal + " exceeds cap " +
                                                  std::to_string(cap));

    const auto& ul = c.uncertain_loads;
    const auto& ug = c.uncertain_gens;
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    Budgets eff{std::min<int>(b.gamma_d, static_cast<int>(ul.size())),
                std::min<int>(b.gamma_g, static_cast<int>(ug.size()))};

    // lexicographic: 0 before 1 at every position, demand side outermost
    std::function<void(size_t, int)> rec_g = [&](size_t pos, int rem) {
        if (pos == ug.size()) {
            emit(realize(c, z_d, z_g, b));
            return;
        }
        rec_g(pos + 1, rem);
        if (rem > 0) {
            z_g[ug[pos]] = 1;
            rec_g(pos + 1, rem - 1);
            z_g[ug[pos]] = 0;
        }
    };
    std::function<void(size_t, int)> rec_d = [&](size_t pos, int rem) {
        if (pos == ul.size()) {
            rec_g(0, eff.gamma_g);
            return;
        }
        rec_d(pos + 1, rem);
        if (rem > 0) {
            z_d[ul[pos]] = 1;
            rec_d(pos + 1, rem - 1);
            z_d[ul[pos]] = 0;
        }
    };
    rec_d(0, eff.gamma_d);
}

namespace {

// Choose `pick` elements out of `pool`, uniformly, by partial Fisher-Yates.
std::vector<int> sample_subset(std::vector<int> pool, int pick, std::mt19937_64& rng) {
    for (int k = 0; k < pick; ++k) {
        size_t swap_with = k + bounded_rand(rng, pool.size() - k);
        std::swap(pool[k], pool[swap_with]);
    }
    pool.resize(pick);
    return pool;
}

int draw_within_budget_count(int n, int gamma, std::mt19937_64& rng) {
    if (gamma <= 0 || n == 0) return 0;
    // P(a) proportional to C(n,a); computed in log space for large n
    std::vector<long double> logw(gamma + 1);
    for (int a = 0; a <= gamma; ++a)
        logw[a] = lgammal(n + 1.0L) - lgammal(a + 1.0L) - lgammal(n - a + 1.0L);
    long double mx = *std::max_element(logw.begin(), logw.end());
    std::vector<long double> w(gamma + 1);
    long double total = 0.0L;
    for (int a = 0; a <= gamma; ++a) {
        w[a] = expl(logw[a] - mx);
        total += w[a];
    }
    long double u = (static_cast<long double>(rng()) / static_cast<long double>(
                         std::numeric_limits<uint64_t>::max())) * total;
    long double acc = 0.0L;
    for (int a = 0; a <= gamma; ++a) {
        acc += w[a];
        if (u <= acc) return a;
    }
    return gamma;
}

}  // namespace

std::vector<Realization> sample_realizations(const GridCase& c, const Budgets& b, long count,
                                             uint64_t seed, SampleMode mode) {
    check_budgets(c, b);
    std::vector<Realization> out;
    if (count <= 0) return out;
    out.reserve(count);
    std::mt19937_64 rng(seed);

    const auto& ul = c.uncertain_loads;
    const auto& ug = c.uncertain_gens;
    int gd = std::min<int>(b.gamma_d, static_cast<int>(ul.size()));
    int gg = std::min<int>(b.gamma_g, static_cast<int>(ug.size()));

    for (long s = 0; s < count; ++s) {
        int pick_d = gd, pick_g = gg;
        if (mode == SampleMode::WithinBudget) {
            pick_d = draw_within_budget_count(static_cast<int>(ul.size()), gd, rng);
            pick_g = draw_within_budget_count(static_cast<int>(ug.size()), gg, rng);
        }
        std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
        for (int j : sample_subset(ul, pick_d, rng)) z_d[j] = 1;
        for (int i : sample_subset(ug, pick_g, rng)) z_g[i] = 1;
        out.push_back(realize(c, z_d, z_g, b));
    }
    return out;
}

std::string realization_to_json(const GridCase& c, const Realization& r) {
    nlohmann::json doc;
    doc["z_d"] = nlohmann::json::array();
    doc["z_g"] = nlohmann::json::array();
    for (size_t j = 0; j < r.z_d.size(); ++j)
        if (r.z_d[j]) doc["z_d"].push_back(c.loads[j].id);
    for (size_t i = 0; i < r.z_g.size(); ++i)
        if (r.z_g[i]) doc["z_g"].push_back(c.generators[i].id);
    doc["demand"] = nlohmann::json::array();
    for (size_t j = 0; j < r.demand.size(); ++j)
        doc["demand"].push_back({{"load", c.loads[j].id}, {"mw", r.demand[j]}});
    doc["capacity"] = nlohmann::json::array();
    for (size_t i = 0; i < r.capacity.size(); ++i)
        doc["capacity"].push_back({{"unit", c.generators[i].id}, {"mw", r.capacity[i]}});
    return doc.dump(2) + "\n";
}

Realization realization_from_json(const GridCase& c, const std::string& text,
                                  const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin, "byte " + std::to_string(e.byte), e.what());
    }
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    auto find_load = [&](long long id) {
        for (size_t j = 0; j < c.loads.size(); ++j)
            if (c.loads[j].id == id) return static_cast<int>(j);
        throw ParseError(origin, "z_d", "unknown load id " + std::to_string(id));
    };
    auto find_gen = [&](long long id) {
        for (size_t i = 0; i < c.generators.size(); ++i)
            if (c.generators[i].id == id) return static_cast<int>(i);
        throw ParseError(origin, "z_g", "unknown unit id " + std::to_string(id));
    };
    for (const auto& v : doc.value("z_d", nlohmann::json::array())) z_d[find_load(v.get<long long>())] = 1;
    for (const auto& v : doc.value("z_g", nlohmann::json::array())) z_g[find_gen(v.get<long long>())] = 1;
    Budgets full{static_cast<int>(c.loads.size()), static_cast<int>(c.generators.size())};
    return realize(c, z_d, z_g, full);
}

}  // namespace rtnep
