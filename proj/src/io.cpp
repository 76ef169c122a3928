#include "gale/io.hpp"

#include <fstream>
#include <sstream>

namespace gale {

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (seps.find(c) != std::string::npos) {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(strip(cur));
    return out;
}

Rational field(const std::string& text, std::size_t line, const char* name) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw InputError(line, std::string("column ") + name + ": " + e.what());
    }
}

std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(0, "cannot open " + path);
    return in;
}

} // namespace

InputError::InputError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

Dataset<Rational> read_observations(std::istream& in) {
    static const char* kColumns[] = {"p1", "p2", "p3", "m", "x1", "x2", "x3"};
    Dataset<Rational> data;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        auto cells = split(line, ",");
        if (!header) {
            if (cells.size() != 7) throw InputError(lineno, "header must be p1,p2,p3,m,x1,x2,x3");
            for (int i = 0; i < 7; ++i)
                if (cells[i] != kColumns[i]) throw InputError(lineno, "header must be p1,p2,p3,m,x1,x2,x3");
            header = true;
            continue;
        }
        if (cells.size() != 7)
            throw InputError(lineno, "expected 7 fields, found " + std::to_string(cells.size()));
        Rational v[7];
        for (int i = 0; i < 7; ++i) v[i] = field(cells[i], lineno, kColumns[i]);
        try {
            data.rows.emplace_back(PriceSystem<Rational>(v[0], v[1], v[2]), v[3], Bundle<Rational>(v[4], v[5], v[6]));
        } catch (const DomainError& e) {
            throw InputError(lineno, e.what());
        }
    }
    return data;
}

Dataset<Rational> read_observations_file(const std::string& path) {
    auto in = open(path);
    auto data = read_observations(in);
    data.provenance = path;
    return data;
}

void write_observations(std::ostream& out, const Dataset<Rational>& data) {
    out << "p1,p2,p3,m,x1,x2,x3\n";
    for (const auto& o : data.rows) {
        for (int i = 0; i < 3; ++i) out << o.p[i] << ',';
        out << o.m;
        for (int i = 0; i < 3; ++i) out << ',' << o.x[i];
        out << '\n';
    }
}

Mat3q read_matrix(std::istream& in) {
    Mat3q m;
    std::string line;
    std::size_t lineno = 0;
    int row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        if (row == 3) throw InputError(lineno, "matrix has more than three rows");
        std::vector<std::string> cells;
        for (auto& c : split(line, ", \t"))
            if (!c.empty()) cells.push_back(c);
        if (cells.size() != 3) throw InputError(lineno, "expected three entries per row");
        for (int j = 0; j < 3; ++j) {
            try {
                m(row, j) = parse_rational(cells[j]);
            } catch (const std::invalid_argument& e) {
                throw InputError(lineno, e.what());
            }
        }
        ++row;
    }
    if (row != 3) throw InputError(lineno, "matrix needs three rows");
    return m;
}

Mat3q read_matrix_file(const std::string& path) {
    auto in = open(path);
    return read_matrix(in);
}

void write_curve(std::ostream& out, const std::vector<PathSample>& samples) {
    out << "t,y1,y2,y3\n";
    for (const auto& s : samples)
        out << to_string(s.t) << ',' << to_string(s.y(0)) << ',' << to_string(s.y(1)) << ',' << to_string(s.y(2))
            << '\n';
}

void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "t,y1,y2,y3\n";
    for (const auto& s : curve)
        out << to_string(s.t) << ',' << to_string(s.y(0)) << ',' << to_string(s.y(1)) << ',' << to_string(s.y(2))
            << '\n';
}

Dataset<Rational> gale_table() {
    static const char* kRows =
        "p1,p2,p3,m,x1,x2,x3\n"
        "9,16,12,9,1,0,0\n"
        "340,440,330,303,0.6,0,0.3\n"
        "410,400,300,303,0.3,0,0.6\n"
        "16,12,9,9,0,0,1\n"
        "440,330,340,303,0,0.3,0.6\n"
        "400,300,410,303,0,0.6,0.3\n"
        "12,9,16,9,0,1,0\n"
        "330,340,440,303,0.3,0.6,0\n"
        "300,410,400,303,0.6,0.3,0\n"
        "9,16,12,9,1,0,0\n";
    std::istringstream in(kRows);
    auto data = read_observations(in);
    data.provenance = "gale1960";
    return data;
}

} // namespace gale
