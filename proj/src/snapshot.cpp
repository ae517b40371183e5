#include "uniqd/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uniqd {

Eigen::Vector2d SnapshotEntry::task_bd(Task t) const
{
    switch (t) {
        case Task::Nav: return bd_nav;
        case Task::Forw: return bd_forw;
        case Task::Turn: return bd_turn;
    }
    throw std::logic_error("bad task");
}

double SnapshotEntry::task_score(Task t) const
{
    switch (t) {
        case Task::Nav: return f_nav;
        case Task::Forw: return f_forw;
        case Task::Turn: return f_turn;
    }
    throw std::logic_error("bad task");
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

constexpr const char* kHeader =
    "genotype,bd,bd_nav_0,bd_nav_1,bd_forw_0,bd_forw_1,bd_turn_0,bd_turn_1,f_nav,f_forw,f_turn";

std::string join_vector(const Eigen::VectorXd& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += format_double(v[i]);
    }
    return out;
}

Eigen::VectorXd parse_vector(const std::string& field, std::size_t row)
{
    std::vector<double> vals;
    std::stringstream ss(field);
    std::string item;
    while (std::getline(ss, item, ';')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw SnapshotError("snapshot row " + std::to_string(row) + ": bad number '" + item + "'");
        }
        if (pos != item.size())
            throw SnapshotError("snapshot row " + std::to_string(row) + ": bad number '" + item + "'");
        vals.push_back(v);
    }
    if (vals.empty())
        throw SnapshotError("snapshot row " + std::to_string(row) + ": empty vector field");
    return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

double parse_double(const std::string& field, std::size_t row)
{
    const Eigen::VectorXd v = parse_vector(field, row);
    if (v.size() != 1)
        throw SnapshotError("snapshot row " + std::to_string(row) + ": expected scalar");
    return v[0];
}

}  // namespace

std::vector<SnapshotEntry> snapshot_from_container(const Container& container)
{
    std::vector<const ContainerEntry*> sorted;
    sorted.reserve(container.size());
    for (const auto& e : container.entries()) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const ContainerEntry* a, const ContainerEntry* b) { return a->id < b->id; });

    std::vector<SnapshotEntry> out;
    out.reserve(sorted.size());
    for (const ContainerEntry* e : sorted) {
        SnapshotEntry s;
        s.genotype = e->genotype;
        s.bd = e->bd;
        s.bd_nav = e->evaluation.bd_nav;
        s.bd_forw = e->evaluation.bd_forw;
        s.bd_turn = e->evaluation.bd_turn;
        s.f_nav = e->evaluation.f_nav;
        s.f_forw = e->evaluation.f_forw;
        s.f_turn = e->evaluation.f_turn;
        out.push_back(std::move(s));
    }
    return out;
}

void write_snapshot(const std::filesystem::path& path, const std::vector<SnapshotEntry>& entries)
{
    std::ofstream out(path);
    if (!out) throw SnapshotError("cannot open " + path.string());
    out << kHeader << '\n';
    for (const auto& e : entries) {
        out << join_vector(e.genotype) << ',' << join_vector(e.bd);
        for (const auto* bd : {&e.bd_nav, &e.bd_forw, &e.bd_turn})
            out << ',' << format_double((*bd)[0]) << ',' << format_double((*bd)[1]);
        out << ',' << format_double(e.f_nav) << ',' << format_double(e.f_forw) << ','
            << format_double(e.f_turn) << '\n';
    }
}

std::vector<SnapshotEntry> read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw SnapshotError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
        throw SnapshotError("snapshot " + path.string() + ": bad header");

    std::vector<SnapshotEntry> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 11)
            throw SnapshotError("snapshot row " + std::to_string(row) + ": expected 11 fields, got " +
                                std::to_string(fields.size()));
        SnapshotEntry e;
        e.genotype = parse_vector(fields[0], row);
        e.bd = parse_vector(fields[1], row);
        e.bd_nav << parse_double(fields[2], row), parse_double(fields[3], row);
        e.bd_forw << parse_double(fields[4], row), parse_double(fields[5], row);
        e.bd_turn << parse_double(fields[6], row), parse_double(fields[7], row);
        e.f_nav = parse_double(fields[8], row);
        e.f_forw = parse_double(fields[9], row);
        e.f_turn = parse_double(fields[10], row);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace uniqd
