#include "rtnep/case_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace rtnep {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "-", "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& origin, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }) == allowed.end()) {
            throw ParseError(origin, where, "unknown key '" + it.key() + "'");
        }
    }
}

double get_num(const json& obj, const char* key, const std::string& origin, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(origin, where, std::string("missing key '") + key + "'");
    if (!it->is_number()) throw ParseError(origin, where, std::string("key '") + key + "' must be a number");
    return it->get<double>();
}

long long get_id(const json& obj, const char* key, const std::string& origin, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(origin, where, std::string("missing key '") + key + "'");
    if (!it->is_number_integer()) throw ParseError(origin, where, std::string("key '") + key + "' must be an integer");
    return it->get<long long>();
}

int require_bus(const GridCase& c, long long external, const std::string& origin, const std::string& where) {
    auto it = c.bus_index.find(external);
    if (it == c.bus_index.end())
        throw ParseError(origin, where, "unknown bus id " + std::to_string(external));
    return it->second;
}

}  // namespace

GridCase parse_case_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin, "byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.is_object()) throw ParseError(origin, "$", "top level must be an object");
    reject_unknown_keys(doc, {"name", "base_mva", "sigma", "investment_budget", "buses", "lines",
                              "generators", "loads"},
                        origin, "$");

    GridCase c;
    if (doc.contains("name")) c.name = doc.at("name").get<std::string>();
    c.base_mva = get_num(doc, "base_mva", origin, "$");
    c.sigma = get_num(doc, "sigma", origin, "$");
    c.investment_budget = get_num(doc, "investment_budget", origin, "$");

    for (const char* key : {"buses", "lines", "generators", "loads"}) {
        if (!doc.contains(key) || !doc.at(key).is_array())
            throw ParseError(origin, "$", std::string("missing array '") + key + "'");
    }

    for (size_t i = 0; i < doc["buses"].size(); ++i) {
        const auto& b = doc["buses"][i];
        std::string where = "buses[" + std::to_string(i) + "]";
        reject_unknown_keys(b, {"id"}, origin, where);
        c.buses.push_back({get_id(b, "id", origin, where)});
    }
    c.rebuild_indices();  // bus_index needed to resolve endpoints

    std::vector<Line> existing, candidates;
    for (size_t i = 0; i < doc["lines"].size(); ++i) {
        const auto& jl = doc["lines"][i];
        std::string where = "lines[" + std::to_string(i) + "]";
        reject_unknown_keys(jl, {"id", "from", "to", "x", "fmax", "status", "build_cost"}, origin, where);
        Line l;
        l.id = get_id(jl, "id", origin, where);
        l.from_bus = require_bus(c, get_id(jl, "from", origin, where), origin, where);
        l.to_bus = require_bus(c, get_id(jl, "to", origin, where), origin, where);
        l.reactance = get_num(jl, "x", origin, where);
        l.capacity = get_num(jl, "fmax", origin, where);
        std::string status = jl.value("status", std::string());
        if (status == "existing") l.status = LineStatus::Existing;
        else if (status == "candidate") l.status = LineStatus::Candidate;
        else throw ParseError(origin, where, "status must be 'existing' or 'candidate'");
        if (l.status == LineStatus::Candidate) {
            if (!jl.contains("build_cost")) l.build_cost = std::numeric_limits<double>::quiet_NaN();
            else l.build_cost = get_num(jl, "build_cost", origin, where);
        } else {
            if (jl.contains("build_cost")) l.build_cost = get_num(jl, "build_cost", origin, where);
            else l.build_cost = 0.0;
        }
        (l.status == LineStatus::Existing ? existing : candidates).push_back(l);
    }
    c.lines = std::move(existing);
    c.lines.insert(c.lines.end(), candidates.begin(), candidates.end());

    for (size_t i = 0; i < doc["generators"].size(); ++i) {
        const auto& jg = doc["generators"][i];
        std::string where = "generators[" + std::to_string(i) + "]";
        reject_unknown_keys(jg, {"id", "bus", "cost", "pmax_nominal", "delta"}, origin, where);
        Generator g;
        g.id = get_id(jg, "id", origin, where);
        g.bus = require_bus(c, get_id(jg, "bus", origin, where), origin, where);
        g.marginal_cost = get_num(jg, "cost", origin, where);
        g.nominal_capacity = get_num(jg, "pmax_nominal", origin, where);
        g.capacity_deviation = get_num(jg, "delta", origin, where);
        c.generators.push_back(g);
    }

    for (size_t i = 0; i < doc["loads"].size(); ++i) {
        const auto& jd = doc["loads"][i];
        std::string where = "loads[" + std::to_string(i) + "]";
        reject_unknown_keys(jd, {"id", "bus", "shed_cost", "demand_nominal", "delta", "gamma"}, origin, where);
        Load d;
        d.id = get_id(jd, "id", origin, where);
        d.bus = require_bus(c, get_id(jd, "bus", origin, where), origin, where);
        d.marginal_shed_cost = get_num(jd, "shed_cost", origin, where);
        d.nominal_demand = get_num(jd, "demand_nominal", origin, where);
        d.demand_deviation = get_num(jd, "delta", origin, where);
        d.shed_fraction = get_num(jd, "gamma", origin, where);
        c.loads.push_back(d);
    }

    c.rebuild_indices();
    return c;
}

std::string serialize_case(const GridCase& c) {
    json doc;
    if (!c.name.empty()) doc["name"] = c.name;
    doc["base_mva"] = c.base_mva;
    doc["sigma"] = c.sigma;
    doc["investment_budget"] = c.investment_budget;
    doc["buses"] = json::array();
    for (const auto& b : c.buses) doc["buses"].push_back({{"id", b.id}});
    doc["lines"] = json::array();
    for (const auto& l : c.lines) {
        json jl{{"id", l.id},
                {"from", c.buses[l.from_bus].id},
                {"to", c.buses[l.to_bus].id},
                {"x", l.reactance},
                {"fmax", l.capacity},
                {"status", l.status == LineStatus::Existing ? "existing" : "candidate"}};
        if (l.status == LineStatus::Candidate) jl["build_cost"] = l.build_cost;
        doc["lines"].push_back(std::move(jl));
    }
    doc["generators"] = json::array();
    for (const auto& g : c.generators) {
        doc["generators"].push_back({{"id", g.id},
                                     {"bus", c.buses[g.bus].id},
                                     {"cost", g.marginal_cost},
                                     {"pmax_nominal", g.nominal_capacity},
                                     {"delta", g.capacity_deviation}});
    }
    doc["loads"] = json::array();
    for (const auto& d : c.loads) {
        doc["loads"].push_back({{"id", d.id},
                                {"bus", c.buses[d.bus].id},
                                {"shed_cost", d.marginal_shed_cost},
                                {"demand_nominal", d.nominal_demand},
                                {"delta", d.demand_deviation},
                                {"gamma", d.shed_fraction}});
    }
    return doc.dump(2) + "\n";
}

namespace {

// Minimal reader for the matlab-style case syntax: `mpc.<field> = scalar;` and
// `mpc.<field> = [ row ; row ; ... ];` with %-comments.
struct MatpowerDoc {
    std::unordered_map<std::string, double> scalars;
    std::unordered_map<std::string, std::vector<std::vector<double>>> tables;
};

MatpowerDoc parse_matpower_text(const std::string& text, const std::string& origin) {
    MatpowerDoc doc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError(origin, "line " + std::to_string(lineno), msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find('%');
        if (cut != std::string::npos) line.erase(cut);
        auto pos = line.find("mpc.");
        if (pos == std::string::npos) continue;
        auto eq = line.find('=', pos);
        if (eq == std::string::npos) continue;
        std::string field = line.substr(pos + 4, eq - pos - 4);
        field.erase(std::remove_if(field.begin(), field.end(), ::isspace), field.end());
        std::string rest = line.substr(eq + 1);

        auto strip = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        rest = strip(rest);
        if (rest.empty()) fail("expected value after '='");
        if (rest[0] != '[') {
            if (!rest.empty() && rest.back() == ';') rest.pop_back();
            rest = strip(rest);
            if (rest.size() >= 2 && rest.front() == '\'' && rest.back() == '\'') continue;  // string fields ignored
            try {
                doc.scalars[field] = std::stod(rest);
            } catch (...) {
                fail("cannot parse scalar value for mpc." + field);
            }
            continue;
        }
        // matrix: accumulate until the closing bracket
        std::string body = rest.substr(1);
        while (body.find(']') == std::string::npos) {
            std::string more;
            if (!std::getline(in, more)) fail("unterminated matrix for mpc." + field);
            ++lineno;
            auto c2 = more.find('%');
            if (c2 != std::string::npos) more.erase(c2);
            body += "\n" + more;
        }
        body.erase(body.find(']'));
        std::vector<std::vector<double>> rows;
        std::string rowbuf;
        auto flush_row = [&]() {
            std::istringstream rs(rowbuf);
            std::vector<double> row;
            double v;
            while (rs >> v) row.push_back(v);
            if (!row.empty()) rows.push_back(std::move(row));
            rowbuf.clear();
        };
        for (char ch : body) {
            if (ch == ';' || ch == '\n') flush_row();
            else rowbuf += (ch == ',' ? ' ' : ch);
        }
        flush_row();
        doc.tables[field] = std::move(rows);
    }
    return doc;
}

}  // namespace

GridCase parse_case_matpower(const std::string& text, const std::string& origin,
                             const ImportDefaults& defaults) {
    MatpowerDoc doc = parse_matpower_text(text, origin);
    auto need_table = [&](const char* name) -> const std::vector<std::vector<double>>& {
        auto it = doc.tables.find(name);
        if (it == doc.tables.end()) throw ParseError(origin, "-", std::string("missing table mpc.") + name);
        return it->second;
    };

    GridCase c;
    c.name = origin;
    c.base_mva = doc.scalars.count("baseMVA") ? doc.scalars.at("baseMVA") : 100.0;
    c.sigma = doc.scalars.count("rtnep_sigma") ? doc.scalars.at("rtnep_sigma") : 1.0;
    c.investment_budget = doc.scalars.count("rtnep_budget") ? doc.scalars.at("rtnep_budget")
                                                            : std::numeric_limits<double>::max();

    const auto& bus_tab = need_table("bus");
    for (size_t r = 0; r < bus_tab.size(); ++r) {
        if (bus_tab[r].size() < 3) throw ParseError(origin, "bus row " + std::to_string(r + 1), "too few columns");
        c.buses.push_back({static_cast<long long>(bus_tab[r][0])});
    }
    c.rebuild_indices();

    // bus table column 3 is the nominal demand
    for (size_t r = 0; r < bus_tab.size(); ++r) {
        double pd = bus_tab[r][2];
        if (pd <= 0.0) continue;
        Load d;
        d.id = static_cast<long long>(bus_tab[r][0]);
        d.bus = static_cast<int>(r);
        d.marginal_shed_cost = defaults.shed_cost;
        d.nominal_demand = pd;
        d.demand_deviation = defaults.demand_deviation_fraction * pd;
        d.shed_fraction = defaults.shed_fraction;
        c.loads.push_back(d);
    }

    const auto& gen_tab = need_table("gen");
    const auto* gencost = doc.tables.count("gencost") ? &doc.tables.at("gencost") : nullptr;
    for (size_t r = 0; r < gen_tab.size(); ++r) {
        const auto& row = gen_tab[r];
        if (row.size() < 9) throw ParseError(origin, "gen row " + std::to_string(r + 1), "too few columns");
        if (row[7] <= 0.0) continue;  // offline unit
        Generator g;
        g.id = static_cast<long long>(r + 1);
        g.bus = require_bus(c, static_cast<long long>(row[0]), origin, "gen row " + std::to_string(r + 1));
        g.nominal_capacity = row[8];
        g.capacity_deviation = 0.0;
        if (gencost && r < gencost->size()) {
            const auto& cr = (*gencost)[r];
            // polynomial model: [2 startup shutdown n cn-1 ... c0]; linear term is second from the end
            if (cr.size() >= 6 && cr[0] == 2.0) g.marginal_cost = cr[cr.size() - 2];
            else if (cr.size() == 5 && cr[0] == 2.0) g.marginal_cost = cr[3];
        }
        c.generators.push_back(g);
    }
    if (doc.tables.count("rtnep_gen_delta")) {
        for (const auto& row : doc.tables.at("rtnep_gen_delta")) {
            if (row.size() < 2) continue;
            int idx = static_cast<int>(row[0]) - 1;
            if (idx >= 0 && idx < static_cast<int>(c.generators.size()))
                c.generators[idx].capacity_deviation = row[1];
        }
    }
    if (doc.tables.count("rtnep_load")) {
        // rows: bus shed_cost delta gamma
        for (const auto& row : doc.tables.at("rtnep_load")) {
            if (row.size() < 4) continue;
            long long bus_id = static_cast<long long>(row[0]);
            for (auto& d : c.loads) {
                if (d.id == bus_id) {
                    d.marginal_shed_cost = row[1];
                    d.demand_deviation = row[2];
                    d.shed_fraction = row[3];
                }
            }
        }
    }

    const auto& br = need_table("branch");
    const auto* cand_cost = doc.tables.count("candidate_cost") ? &doc.tables.at("candidate_cost") : nullptr;
    std::vector<Line> existing, candidates;
    for (size_t r = 0; r < br.size(); ++r) {
        const auto& row = br[r];
        if (row.size() < 11) throw ParseError(origin, "branch row " + std::to_string(r + 1), "too few columns");
        Line l;
        l.id = static_cast<long long>(r + 1);
        std::string where = "branch row " + std::to_string(r + 1);
        l.from_bus = require_bus(c, static_cast<long long>(row[0]), origin, where);
        l.to_bus = require_bus(c, static_cast<long long>(row[1]), origin, where);
        l.reactance = row[3];
        l.capacity = row[5];
        bool in_service = row[10] != 0.0;
        if (in_service) {
            l.status = LineStatus::Existing;
            existing.push_back(l);
        } else {
            l.status = LineStatus::Candidate;
            l.build_cost = std::numeric_limits<double>::quiet_NaN();
            if (cand_cost) {
                for (const auto& cc : *cand_cost) {
                    if (cc.size() >= 2 && static_cast<size_t>(cc[0]) == r + 1) l.build_cost = cc[1];
                }
            }
            candidates.push_back(l);
        }
    }
    c.lines = std::move(existing);
    c.lines.insert(c.lines.end(), candidates.begin(), candidates.end());
    c.rebuild_indices();
    return c;
}

GridCase load_case(const std::string& path, CaseFormat format, const ImportDefaults& defaults) {
    std::string text = read_file(path);
    GridCase c = format == CaseFormat::NativeJson ? parse_case_json(text, path)
                                                  : parse_case_matpower(text, path, defaults);
    if (c.name.empty()) c.name = path;
    require_valid(c);
    return c;
}

}  // namespace rtnep
