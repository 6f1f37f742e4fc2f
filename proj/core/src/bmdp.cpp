#include "brl/bmdp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace brl {

void BudgetedMdp::validate() const {
    if (n_states <= 0 || n_actions <= 0) {
        throw std::invalid_argument("BudgetedMdp: n_states and n_actions must be positive");
    }
    const std::size_t sa = static_cast<std::size_t>(n_states) * n_actions;
    if (transition.size() != sa * n_states || reward.size() != sa || cost.size() != sa) {
        throw std::invalid_argument("BudgetedMdp: table sizes do not match n_states/n_actions");
    }
    if (!terminal.empty() && terminal.size() != static_cast<std::size_t>(n_states)) {
        throw std::invalid_argument("BudgetedMdp: terminal flag size mismatch");
    }
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("BudgetedMdp: gamma must lie in [0, 1]");
    }
    if (!(budget_space.lo <= budget_space.hi)) {
        throw std::invalid_argument("BudgetedMdp: budget interval must satisfy lo <= hi");
    }
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double row = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                const double pr = p(s, a, s2);
                if (pr < 0.0 || !std::isfinite(pr)) {
                    throw std::invalid_argument("BudgetedMdp: negative or non-finite probability");
                }
                row += pr;
            }
            if (std::abs(row - 1.0) > 1e-12) {
                std::ostringstream os;
                os << "BudgetedMdp: transition row (s=" << s << ", a=" << a
                   << ") sums to " << row << ", expected 1";
                throw std::invalid_argument(os.str());
            }
            if (!std::isfinite(r(s, a)) || !std::isfinite(c(s, a))) {
                throw std::invalid_argument("BudgetedMdp: non-finite reward or cost entry");
            }
        }
    }
}

namespace {

BudgetedMdp parse_mdp(const nlohmann::json& j) {
    BudgetedMdp m;
    m.n_states = j.at("n_states").get<int>();
    m.n_actions = j.at("n_actions").get<int>();
    m.gamma = j.at("gamma").get<double>();
    m.budget_space.lo = j.at("budget_min").get<double>();
    m.budget_space.hi = j.at("budget_max").get<double>();

    const auto& tr = j.at("transition");
    const auto& rw = j.at("reward");
    const auto& co = j.at("cost");
    m.transition.reserve(static_cast<std::size_t>(m.n_states) * m.n_actions * m.n_states);
    m.reward.reserve(static_cast<std::size_t>(m.n_states) * m.n_actions);
    m.cost.reserve(m.reward.capacity());
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            for (int s2 = 0; s2 < m.n_states; ++s2) {
                m.transition.push_back(tr.at(s).at(a).at(s2).get<double>());
            }
            m.reward.push_back(rw.at(s).at(a).get<double>());
            m.cost.push_back(co.at(s).at(a).get<double>());
        }
    }
    if (j.contains("terminal")) {
        m.terminal.assign(m.n_states, false);
        for (const auto& t : j.at("terminal")) m.terminal[t.get<int>()] = true;
    }
    m.validate();
    return m;
}

} // namespace

BudgetedMdp BudgetedMdp::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open BMDP file: " + path);
    nlohmann::json j;
    in >> j;
    return parse_mdp(j);
}

BudgetedMdp BudgetedMdp::from_json_text(const std::string& text) {
    return parse_mdp(nlohmann::json::parse(text));
}

void BudgetedMdp::save_json(const std::string& path) const {
    nlohmann::json j;
    j["n_states"] = n_states;
    j["n_actions"] = n_actions;
    j["gamma"] = gamma;
    j["budget_min"] = budget_space.lo;
    j["budget_max"] = budget_space.hi;
    auto tr = nlohmann::json::array();
    auto rw = nlohmann::json::array();
    auto co = nlohmann::json::array();
    for (int s = 0; s < n_states; ++s) {
        auto trs = nlohmann::json::array();
        auto rws = nlohmann::json::array();
        auto cos = nlohmann::json::array();
        for (int a = 0; a < n_actions; ++a) {
            auto row = nlohmann::json::array();
            for (int s2 = 0; s2 < n_states; ++s2) row.push_back(p(s, a, s2));
            trs.push_back(row);
            rws.push_back(r(s, a));
            cos.push_back(c(s, a));
        }
        tr.push_back(trs);
        rw.push_back(rws);
        co.push_back(cos);
    }
    j["transition"] = tr;
    j["reward"] = rw;
    j["cost"] = co;
    if (!terminal.empty()) {
        auto t = nlohmann::json::array();
        for (int s = 0; s < n_states; ++s)
            if (terminal[s]) t.push_back(s);
        j["terminal"] = t;
    }
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

AugmentedState augmented_transition_sample(const BudgetedMdp& mdp, const AugmentedState& s,
                                           const AugmentedAction& a, Rng& rng) {
    const int si = static_cast<int>(s.state.at(0));
    if (si < 0 || si >= mdp.n_states) throw std::domain_error("augmented_transition_sample: bad state index");
    if (a.action < 0 || a.action >= mdp.n_actions) throw std::domain_error("augmented_transition_sample: bad action index");

    const double u = rng.uniform01();
    double acc = 0.0;
    int next = mdp.n_states - 1;
    for (int s2 = 0; s2 < mdp.n_states; ++s2) {
        acc += mdp.p(si, a.action, s2);
        if (u < acc) {
            next = s2;
            break;
        }
    }
    // Budget dynamics are a Dirac at the allocated budget.
    return AugmentedState{{static_cast<double>(next)}, a.budget_allocation};
}

} // namespace brl
