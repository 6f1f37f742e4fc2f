#include "brl/batch.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace brl {

namespace {

constexpr std::uint32_t kMagic = 0x42524C42; // "BRLB"
constexpr std::uint32_t kVersion = 1;

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

std::vector<double> split_doubles(const std::string& line) {
    std::vector<double> out;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        double v = 0.0;
        const auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc{}) throw std::runtime_error("batch csv: bad number in line: " + line);
        out.push_back(v);
        p = res.ptr;
        if (p < end && *p == ',') ++p;
    }
    return out;
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("batch file truncated");
    return v;
}

} // namespace

void TransitionBatch::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write batch file: " + path);
    for (int d = 0; d < state_dim; ++d) os << "s_" << d << ',';
    os << "beta,action,beta_a,reward,cost,";
    for (int d = 0; d < state_dim; ++d) os << "sp_" << d << ',';
    os << "done\n";

    std::string line;
    for (const auto& t : items) {
        line.clear();
        for (int d = 0; d < state_dim; ++d) {
            append_double(line, t.aug_state.state[d]);
            line.push_back(',');
        }
        append_double(line, t.aug_state.budget);
        line.push_back(',');
        append_double(line, t.aug_action.action);
        line.push_back(',');
        append_double(line, t.aug_action.budget_allocation);
        line.push_back(',');
        append_double(line, t.reward);
        line.push_back(',');
        append_double(line, t.cost);
        line.push_back(',');
        for (int d = 0; d < state_dim; ++d) {
            append_double(line, t.next_aug_state.state[d]);
            line.push_back(',');
        }
        line.push_back(t.terminal ? '1' : '0');
        line.push_back('\n');
        os << line;
    }
}

TransitionBatch TransitionBatch::load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open batch file: " + path);
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("batch csv: empty file: " + path);

    int state_dim = 0;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (col.rfind("s_", 0) == 0) ++state_dim;
        }
    }

    TransitionBatch b;
    b.state_dim = state_dim;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto v = split_doubles(line);
        const std::size_t expect = 2 * state_dim + 6;
        if (v.size() != expect) throw std::runtime_error("batch csv: wrong column count");
        Transition t;
        std::size_t i = 0;
        t.aug_state.state.assign(v.begin(), v.begin() + state_dim);
        i += state_dim;
        t.aug_state.budget = v[i++];
        t.aug_action.action = static_cast<int>(v[i++]);
        t.aug_action.budget_allocation = v[i++];
        t.reward = v[i++];
        t.cost = v[i++];
        t.next_aug_state.state.assign(v.begin() + i, v.begin() + i + state_dim);
        i += state_dim;
        t.next_aug_state.budget = t.aug_action.budget_allocation;
        t.terminal = v[i] != 0.0;
        b.items.push_back(std::move(t));
    }
    return b;
}

void TransitionBatch::save_binary(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write batch file: " + path);
    write_pod(os, kMagic);
    write_pod(os, kVersion);
    write_pod(os, static_cast<std::uint32_t>(state_dim));
    write_pod(os, static_cast<std::uint64_t>(items.size()));
    for (const auto& t : items) {
        os.write(reinterpret_cast<const char*>(t.aug_state.state.data()),
                 static_cast<std::streamsize>(state_dim * sizeof(double)));
        write_pod(os, t.aug_state.budget);
        write_pod(os, static_cast<std::int32_t>(t.aug_action.action));
        write_pod(os, t.aug_action.budget_allocation);
        write_pod(os, t.reward);
        write_pod(os, t.cost);
        os.write(reinterpret_cast<const char*>(t.next_aug_state.state.data()),
                 static_cast<std::streamsize>(state_dim * sizeof(double)));
        write_pod(os, static_cast<std::uint8_t>(t.terminal ? 1 : 0));
    }
}

TransitionBatch TransitionBatch::load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open batch file: " + path);
    if (read_pod<std::uint32_t>(is) != kMagic) throw std::runtime_error("bad batch magic");
    if (read_pod<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported batch version");
    TransitionBatch b;
    b.state_dim = static_cast<int>(read_pod<std::uint32_t>(is));
    const auto count = read_pod<std::uint64_t>(is);
    b.items.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Transition t;
        t.aug_state.state.resize(b.state_dim);
        is.read(reinterpret_cast<char*>(t.aug_state.state.data()),
                static_cast<std::streamsize>(b.state_dim * sizeof(double)));
        t.aug_state.budget = read_pod<double>(is);
        t.aug_action.action = static_cast<int>(read_pod<std::int32_t>(is));
        t.aug_action.budget_allocation = read_pod<double>(is);
        t.reward = read_pod<double>(is);
        t.cost = read_pod<double>(is);
        t.next_aug_state.state.resize(b.state_dim);
        is.read(reinterpret_cast<char*>(t.next_aug_state.state.data()),
                static_cast<std::streamsize>(b.state_dim * sizeof(double)));
        t.next_aug_state.budget = t.aug_action.budget_allocation;
        t.terminal = read_pod<std::uint8_t>(is) != 0;
        if (!is) throw std::runtime_error("batch file truncated");
        b.items.push_back(std::move(t));
    }
    return b;
}

} // namespace brl
