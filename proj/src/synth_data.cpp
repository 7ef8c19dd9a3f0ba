#include "quanting/synth_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "quanting/rng.hpp"

namespace quanting {

namespace {

// scale is a power of ten; dividing by it lands on the double nearest the
// decimal, which then prints in its short form
double round_to(double v, double scale) { return std::round(v * scale) / scale; }

RawColumn numeric_column(std::string name) {
    RawColumn col;
    col.name = std::move(name);
    col.kind = ColumnKind::numeric;
    return col;
}

RawTable linear_exp_table(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    RawTable table;
    table.columns = {numeric_column("x1"), numeric_column("y")};
    table.n_rows = rows;
    for (std::size_t i = 0; i < rows; ++i) {
        const double x = rng.next_double();
        const double y = x + rng.exponential();
        table.columns[0].numeric.push_back(x);
        table.columns[1].numeric.push_back(y);
    }
    return table;
}

RawTable step_table(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    RawTable table;
    table.columns = {numeric_column("x1"), numeric_column("x2"), numeric_column("y")};
    table.n_rows = rows;
    for (std::size_t i = 0; i < rows; ++i) {
        const double x1 = rng.next_double();
        const double x2 = rng.next_double();
        const double level = x1 < 0.3 ? 1.0 : (x1 < 0.7 ? 3.0 : 2.0);
        const double y = level + 0.2 * rng.next_double();
        table.columns[0].numeric.push_back(x1);
        table.columns[1].numeric.push_back(x2);
        table.columns[2].numeric.push_back(y);
    }
    return table;
}

RawTable het_table(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    RawTable table;
    table.columns = {numeric_column("x1"), numeric_column("x2"), numeric_column("y")};
    table.n_rows = rows;
    for (std::size_t i = 0; i < rows; ++i) {
        const double x1 = rng.next_double();
        const double x2 = rng.next_double();
        const double y = 2.0 + 1.5 * x1 * x1 + 0.4 * x2 + (0.15 + 0.9 * x1) * rng.normal();
        table.columns[0].numeric.push_back(x1);
        table.columns[1].numeric.push_back(x2);
        table.columns[2].numeric.push_back(y);
    }
    return table;
}

// Housing-style table: 13 feature columns named after the classic Boston
// schema, nonlinear price surface, noise scale tied to the status column.
RawTable housing_table(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    RawTable table;
    for (const char* name : {"crim", "zn", "indus", "chas", "nox", "rm", "age", "dis", "rad",
                             "tax", "ptratio", "b", "lstat", "medv"})
        table.columns.push_back(numeric_column(name));
    table.n_rows = rows;

    static const double rad_levels[] = {1, 2, 3, 4, 5, 6, 7, 8, 24};
    for (std::size_t i = 0; i < rows; ++i) {
        const double crim = round_to(std::min(0.006 + 9.0 * rng.exponential(), 89.0), 1e4);
        const double zn = rng.next_double() < 0.72
                              ? 0.0
                              : 12.5 * static_cast<double>(1 + rng.next_index(7));
        const double indus = round_to(1.9 + 25.0 * rng.next_double(), 1e2);
        const double chas = rng.next_double() < 0.07 ? 1.0 : 0.0;
        const double nox = round_to(0.38 + 0.48 * rng.next_double() * rng.next_double(), 1e4);
        const double rm =
            round_to(std::clamp(6.28 + 0.72 * rng.normal(), 3.6, 8.8), 1e4);
        const double age = round_to(100.0 * std::pow(rng.next_double(), 0.6), 1e1);
        const double u_dis = rng.next_double();
        const double dis = round_to(1.1 + 10.0 * u_dis * u_dis, 1e4);
        const double rad = rad_levels[rng.next_index(9)];
        const double tax = std::round(165.0 + 14.0 * rad + 260.0 * rng.next_double());
        const double ptratio = round_to(12.6 + 9.4 * rng.next_double(), 1e1);
        const double b = round_to(396.9 - 340.0 * std::pow(rng.next_double(), 3.0), 1e2);
        const double lstat = round_to(std::min(1.7 + 36.0 * std::pow(rng.next_double(), 2.2) +
                                                   1.8 * rng.exponential(),
                                               38.0),
                                      1e2);

        double medv = 22.8 + 5.6 * (rm - 6.28) - 0.48 * (lstat - 11.0) - 16.0 * (nox - 0.54) -
                      0.33 * (ptratio - 17.3) + 2.7 * chas - 0.24 * std::min(crim, 25.0) +
                      0.021 * (zn - 11.0) - 0.025 * (age - 60.0) * (dis < 3.0 ? 1.0 : 0.35);
        if (rm > 7.2)
            medv += 4.5 * (rm - 7.2) / 0.8; // premium bracket
        if (lstat > 24.0)
            medv -= 2.5;
        const double noise_scale = 0.8 + 0.075 * lstat;
        medv += noise_scale * rng.normal();
        if (rng.next_double() < 0.03)
            medv += 6.0 * rng.next_double(); // occasional upside outlier
        medv = round_to(std::clamp(medv, 5.0, 50.0), 1e2);

        const double values[] = {crim, zn,  indus, chas,    nox, rm,    age,
                                 dis,  rad, tax,   ptratio, b,   lstat, medv};
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            table.columns[c].numeric.push_back(values[c]);
    }
    return table;
}

} // namespace

bool is_synthetic_name(const std::string& name) {
    return name == "linear-exp" || name == "step" || name == "het" || name == "housing";
}

RawTable make_synthetic_table(const SyntheticSpec& spec) {
    if (spec.rows == 0)
        throw std::invalid_argument("synthetic table needs at least one row");
    if (spec.name == "linear-exp")
        return linear_exp_table(spec.rows, spec.seed);
    if (spec.name == "step")
        return step_table(spec.rows, spec.seed);
    if (spec.name == "het")
        return het_table(spec.rows, spec.seed);
    if (spec.name == "housing")
        return housing_table(spec.rows, spec.seed);
    throw std::invalid_argument("unknown synthetic generator: " + spec.name);
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
    return preprocess(make_synthetic_table(spec), ColumnSchema::all_numeric());
}

void write_csv(const std::string& path, const RawTable& table) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c].name;
    out << "\n";
    char buffer[64];
    for (std::size_t i = 0; i < table.n_rows; ++i) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& col = table.columns[c];
            if (c)
                out << ',';
            if (col.kind == ColumnKind::numeric) {
                // shortest round-trip formatting keeps regenerated files
                // byte-identical
                auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), col.numeric[i]);
                out.write(buffer, ptr - buffer);
                (void)ec;
            } else {
                out << col.text[i];
            }
        }
        out << "\n";
    }
}

} // namespace quanting
