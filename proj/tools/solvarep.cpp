// solvarep command-line front end.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "solvarep/abelian.hpp"
#include "solvarep/catalog.hpp"
#include "solvarep/fclass.hpp"
#include "solvarep/repbuilder.hpp"

using namespace solvarep;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Command {
    std::string verb;
    std::string action;
    std::string catalog_name, file, abelian;
    u64 n = 0;
    std::string field;
    std::string mode = "cyclotomic";
    std::string format = "text";
    int digits = 0;
    u64 prime = 0;
};

// ---- display helpers ----------------------------------------------------------------

std::string num_text(const Cyclotomic& a, int digits) {
    if (digits <= 0) return a.to_text();
    const int bits = std::max(53, static_cast<int>(std::ceil(digits * 3.33)) + 16);
    auto v = embed_numeric(a, bits, digits);
    if (v.im == "0") return v.re;
    std::string im = v.im;
    std::string sign = "+";
    if (!im.empty() && im[0] == '-') {
        sign = "-";
        im = im.substr(1);
    }
    return (v.re == "0" ? (sign == "-" ? "-" : "") : v.re + sign) + im + "i";
}

json num_json(const Cyclotomic& a, int digits) {
    if (digits <= 0) return a.to_json();
    const int bits = std::max(53, static_cast<int>(std::ceil(digits * 3.33)) + 16);
    auto v = embed_numeric(a, bits, digits);
    return {{"re", v.re}, {"im", v.im}};
}

std::string entry_text(const CycloField&, const Cyclotomic& a, int digits) { return num_text(a, digits); }
template <class F>
std::string entry_text(const F& f, const typename F::V& a, int) {
    return f.to_text(a);
}

// rows of a matrix with columns padded to a common width
template <class F>
std::string matrix_text(const ExactMatrix<F>& M, int digits, const std::string& indent) {
    std::vector<std::vector<std::string>> cells(M.rows());
    std::vector<std::size_t> w(M.cols(), 0);
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
            cells[i].push_back(entry_text(M.field(), M(i, j), digits));
            w[j] = std::max(w[j], cells[i][j].size());
        }
    std::string out;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        out += indent + "[";
        for (std::size_t j = 0; j < M.cols(); ++j) {
            if (j) out += "  ";
            out += std::string(w[j] - cells[i][j].size(), ' ') + cells[i][j];
        }
        out += "]\n";
    }
    return out;
}

json matrix_json(const ExactMatrix<CycloField>& M, int digits) {
    if (digits <= 0) return M.to_json();
    json m = json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(num_json(M(i, j), digits));
        m.push_back(row);
    }
    return m;
}

std::string field_matrix_text(const FieldMatrix& M, int digits, const std::string& indent) {
    if (M.exact) return matrix_text(*M.exact, digits, indent);
    return matrix_text(*M.finite, digits, indent);
}

json field_matrix_json(const FieldMatrix& M, int digits) {
    if (M.exact) return matrix_json(*M.exact, digits);
    return M.to_json();
}

// ---- group sources ----------------------------------------------------------------

int source_count(const Command& c) {
    return !c.catalog_name.empty() + !c.file.empty() + !c.abelian.empty() + (c.n > 0);
}

LongPresentation load_presentation(const Command& c) {
    if (!c.catalog_name.empty()) return catalog(c.catalog_name);
    if (!c.file.empty()) {
        std::ifstream in(c.file);
        if (!in) fail("file_unreadable", "cannot read '" + c.file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_presentation(ss.str());
    }
    if (!c.abelian.empty()) return abelian_long_presentation(AbelianGroup::parse(c.abelian));
    return cyclic_presentation(static_cast<unsigned>(c.n));
}

FieldDescriptor field_or(const Command& c, FieldDescriptor d) {
    return c.field.empty() ? d : FieldDescriptor::parse(c.field);
}

PciOptions pci_options(const Command& c) {
    PciOptions o;
    if (c.prime) o.prime = c.prime;
    return o;
}

bool modular(const Command& c) { return c.mode == "modl"; }

void emit(const Command& c, const json& j, const std::string& text) {
    if (c.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

void require_format(const Command& c, bool dot_ok) {
    if (c.format == "dot" && !dot_ok) throw UsageError("--format dot is only available for diagrams");
}

int cmd_abelian(const Command& c);

// ---- verbs ------------------------------------------------------------------------

int cmd_info(const Command& c) {
    require_format(c, false);
    PcGroup G(load_presentation(c));
    json primes = json::array();
    for (int k = 0; k < G.rank(); ++k) primes.push_back(G.prime(k));
    json sizes = json::array();
    for (int i = 0; i <= G.rank(); ++i) sizes.push_back(G.level_order(i));
    const std::string pres = print_presentation(G.presentation());
    json j{{"group", G.name()},   {"order", G.order()},
           {"rank", G.rank()},    {"primes", primes},
           {"exponent", G.exponent()}, {"classes", G.classes(G.rank()).size()},
           {"series_orders", sizes}, {"presentation", pres}};
    std::ostringstream os;
    os << "group:        " << G.name() << "\n"
       << "order:        " << G.order() << "\n"
       << "rank:         " << G.rank() << "\n"
       << "primes:      ";
    for (int k = 0; k < G.rank(); ++k) os << " " << G.prime(k);
    os << "\nexponent:     " << G.exponent() << "\n"
       << "classes:      " << G.classes(G.rank()).size() << "\n"
       << "presentation:\n"
       << pres;
    if (!pres.empty() && pres.back() != '\n') os << "\n";
    emit(c, j, os.str());
    return 0;
}

std::optional<AbelianShape> single_pgroup(const Command& c) {
    if (c.abelian.empty()) return std::nullopt;
    auto sh = AbelianGroup::parse(c.abelian).shapes();
    if (sh.size() != 1) return std::nullopt;
    return sh[0];
}

int cmd_diagram(const Command& c) {
    require_format(c, true);
    const auto F = field_or(c, FieldDescriptor::complex());
    if (F.kind == FieldDescriptor::Kind::Rational && single_pgroup(c)) {
        auto D = pgroup_pci_diagram_Q(*single_pgroup(c));
        if (c.format == "dot")
            std::cout << D->to_dot();
        else
            emit(c, D->to_json(), D->to_text());
        return 0;
    }
    if (F.kind != FieldDescriptor::Kind::Complex)
        fail("unsupported_field", "diagrams over " + F.name() + " are built for abelian p-groups over Q only");
    PcGroup G(load_presentation(c));
    if (modular(c)) {
        auto D = build_pci_diagram_modular(G, pci_options(c));
        if (c.format == "dot")
            std::cout << D.to_dot();
        else
            emit(c, D.to_json(), D.to_text());
        return 0;
    }
    auto D = build_pci_diagram(G, pci_options(c));
    if (c.format == "dot")
        std::cout << D.to_dot();
    else
        emit(c, D.to_json(), D.to_text());
    return 0;
}

int cmd_pci(const Command& c) {
    require_format(c, false);
    const auto F = field_or(c, FieldDescriptor::complex());
    PcGroup G(load_presentation(c));
    const int top = G.rank();
    json arr = json::array();
    std::ostringstream os;
    if (modular(c)) {
        if (F.kind != FieldDescriptor::Kind::Complex) fail("unsupported_field", "--mode modl gives the split PCIs only");
        auto D = build_pci_diagram_modular(G, pci_options(c));
        os << "PCIs of " << G.name() << " modulo " << D.prime() << " (" << D.leaves().size() << ")\n";
        for (auto& node : D.leaves()) {
            auto e = D.idempotent(top, node.id);
            arr.push_back({{"id", node.id}, {"degree", node.degree}, {"idempotent", e.to_json()}});
            os << "[" << node.id << "] d=" << node.degree << "  " << e.to_text() << "\n";
        }
        emit(c, {{"group", G.name()}, {"prime", D.prime()}, {"pcis", arr}}, os.str());
        return 0;
    }
    auto D = build_pci_diagram(G, pci_options(c));
    if (F.kind == FieldDescriptor::Kind::Complex) {
        os << "PCIs of " << G.name() << " over C (" << D.leaves().size() << ")\n";
        for (auto& node : D.leaves()) {
            auto e = D.idempotent(top, node.id);
            arr.push_back({{"id", node.id}, {"degree", node.degree}, {"idempotent", e.to_json()}});
            os << "[" << node.id << "] d=" << node.degree << "  " << e.to_text() << "\n";
        }
    } else {
        auto orbits = galois_orbit_sum_pcis(D, F);
        os << "PCIs of " << G.name() << " over " << F.name() << " (" << orbits.size() << ")\n";
        for (std::size_t k = 0; k < orbits.size(); ++k) {
            auto& o = orbits[k];
            arr.push_back({{"id", k}, {"leaves", o.leaves}, {"delta", o.delta}, {"degree", o.degree},
                           {"idempotent", o.idempotent.to_json()}});
            os << "[" << k << "] leaves=";
            for (std::size_t i = 0; i < o.leaves.size(); ++i) os << (i ? "," : "") << o.leaves[i];
            os << " d=" << o.degree << "  " << o.idempotent.to_text() << "\n";
        }
    }
    emit(c, {{"group", G.name()}, {"field", F.name()}, {"pcis", arr}}, os.str());
    return 0;
}

template <class F>
std::string rep_text(const MatrixRep<F>& r, int digits) {
    std::ostringstream os;
    os << "rep " << r.leaf << " (degree " << r.degree << ")\n";
    const auto& pres = r.group().presentation();
    for (int k = 0; k < r.group().rank(); ++k) os << "  " << pres.gens[k] << ":\n" << matrix_text(r.gens[k], digits, "    ");
    return os.str();
}

json rep_json(const ExactRep& r, int digits) {
    json j = r.to_json();
    if (digits > 0)
        for (int k = 0; k < r.group().rank(); ++k) j["generators"][k]["matrix"] = matrix_json(r.gens[k], digits);
    return j;
}

int cmd_irreps(const Command& c) {
    require_format(c, false);
    if (!c.abelian.empty() || c.n > 0) {
        const auto F = field_or(c, FieldDescriptor::complex());
        json arr = json::array();
        std::ostringstream os;
        if (c.n > 0) {
            auto reps = cyclic_irreps(c.n, F);
            os << "irreps of C" << c.n << " over " << F.name() << " (" << reps.size() << ")\n";
            for (std::size_t k = 0; k < reps.size(); ++k) {
                auto& r = reps[k];
                arr.push_back({{"id", k}, {"degree", r.degree()}, {"faithful", r.faithful}, {"factor", r.factor.to_json()},
                               {"matrix", field_matrix_json(r.matrix, c.digits)}});
                os << "rep " << k << " (degree " << r.degree() << (r.faithful ? ", faithful" : "")
                   << ") f = " << r.factor.to_text() << "\n  x:\n"
                   << field_matrix_text(r.matrix, c.digits, "    ");
            }
            emit(c, {{"group", "C" + std::to_string(c.n)}, {"field", F.name()}, {"irreps", arr}}, os.str());
            return 0;
        }
        auto G = AbelianGroup::parse(c.abelian);
        auto reps = abelian_irreps(G, F);
        os << "irreps of " << G.to_text() << " over " << F.name() << " (" << reps.size() << ")\n";
        for (std::size_t k = 0; k < reps.size(); ++k) {
            auto& r = reps[k];
            json j = r.to_json(G);
            j["id"] = k;
            for (std::size_t i = 0; i < r.gens.size(); ++i) j["generators"][i]["matrix"] = field_matrix_json(r.gens[i], c.digits);
            arr.push_back(j);
            os << "rep " << k << " (degree " << r.degree() << ", d = " << r.quotient.d << ") f = " << r.factor.to_text()
               << "\n";
            for (std::size_t i = 0; i < r.gens.size(); ++i)
                os << "  e" << i + 1 << " (order " << G.cyclic[i] << "):\n" << field_matrix_text(r.gens[i], c.digits, "    ");
        }
        emit(c, {{"group", G.to_text()}, {"field", F.name()}, {"irreps", arr}}, os.str());
        return 0;
    }
    const auto F = field_or(c, FieldDescriptor::complex());
    if (F.kind != FieldDescriptor::Kind::Complex)
        fail("unsupported_field", "matrix representations of nonabelian groups are built over C only");
    PcGroup G(load_presentation(c));
    json arr = json::array();
    std::ostringstream os;
    if (modular(c)) {
        auto D = build_pci_diagram_modular(G, pci_options(c));
        auto reps = all_irreps(D);
        os << "irreps of " << G.name() << " modulo " << D.prime() << " (" << reps.size() << ")\n";
        for (auto& r : reps) {
            arr.push_back(r.to_json());
            os << rep_text(r, 0);
        }
        emit(c, {{"group", G.name()}, {"prime", D.prime()}, {"irreps", arr}}, os.str());
        return 0;
    }
    auto reps = all_irreps(G, pci_options(c));
    os << "irreps of " << G.name() << " (" << reps.size() << ")\n";
    for (auto& r : reps) {
        arr.push_back(rep_json(r, c.digits));
        os << rep_text(r, c.digits);
    }
    emit(c, {{"group", G.name()}, {"field", "C"}, {"irreps", arr}}, os.str());
    return 0;
}

int cmd_chartable(const Command& c) {
    require_format(c, false);
    const auto F = field_or(c, FieldDescriptor::rational());
    PcGroup G(load_presentation(c));
    auto D = build_pci_diagram(G, pci_options(c));
    auto T = reduced_f_character_table(D, F);
    json j = T.to_json();
    j["group"] = G.name();
    emit(c, j, "character table of " + G.name() + " over " + F.name() + "\n" + T.to_text());
    return 0;
}

int cmd_fclasses(const Command& c) {
    require_format(c, false);
    const auto F = field_or(c, FieldDescriptor::rational());
    PcGroup G(load_presentation(c));
    auto cls = f_conjugacy_classes(G, F);
    const int top = G.rank();
    json arr = json::array();
    std::ostringstream os;
    os << F.name() << "-classes of " << G.name() << " (" << cls.size() << ")\n";
    for (std::size_t k = 0; k < cls.size(); ++k) {
        const auto& fc = cls[k];
        json members = json::array();
        std::string names;
        for (int id : fc.classes)
            for (auto g : G.classes(top)[id].members) {
                members.push_back(G.elt_name(g));
                names += (names.empty() ? "" : ", ") + G.elt_name(g);
            }
        arr.push_back({{"id", k}, {"rep", G.elt_name(fc.rep)}, {"order", fc.order}, {"size", fc.size},
                       {"classes", fc.classes}, {"exponents", fc.exponents}, {"elements", members}});
        os << "L" << k + 1 << "  order " << fc.order << "  size " << fc.size << "  {" << names << "}\n";
    }
    emit(c, {{"group", G.name()}, {"field", F.name()}, {"fclasses", arr}}, os.str());
    return 0;
}

int cmd_cyclic(const Command& c) {
    require_format(c, false);
    if (c.n == 0) throw UsageError("cyclic needs --n");
    const auto F = field_or(c, FieldDescriptor::rational());
    const std::string action = c.action.empty() ? "factor" : c.action;
    std::ostringstream os;
    if (action == "factor") {
        auto fs = factor_xn_minus_1(c.n, F);
        json arr = json::array();
        os << "X^" << c.n << " - 1 over " << F.name() << " (" << fs.size() << " factors)\n";
        for (auto& f : fs) {
            arr.push_back(f.to_json());
            os << "  d=" << f.d << "  " << f.to_text() << "\n";
        }
        emit(c, {{"n", c.n}, {"field", F.name()}, {"factors", arr}}, os.str());
        return 0;
    }
    if (action == "irreps") {
        Command d = c;
        d.field = F.name();
        return cmd_irreps(d);
    }
    if (action == "pci") {
        json arr = json::array();
        os << "PCIs of C" << c.n << " over " << F.name() << "\n";
        for (auto& f : factor_xn_minus_1(c.n, F)) {
            auto r = pci_from_factor(f, c.n);
            json e = r.exact ? r.exact->to_json() : r.finite->to_json();
            std::string t = r.exact ? r.exact->to_text() : r.finite->to_text();
            arr.push_back({{"factor", f.to_json()}, {"power_sums", r.power_sums}, {"idempotent", e}});
            os << "  f = " << f.to_text() << "\n    e = " << t << "\n";
        }
        emit(c, {{"n", c.n}, {"field", F.name()}, {"pcis", arr}}, os.str());
        return 0;
    }
    if (action == "wedderburn") {
        Command d = c;
        d.abelian = std::to_string(c.n);
        d.n = 0;
        d.field = F.name();
        return cmd_abelian(d);
    }
    throw UsageError("unknown cyclic action '" + action + "' (factor, irreps, pci, wedderburn)");
}

int cmd_abelian(const Command& c) {
    require_format(c, true);
    if (c.abelian.empty()) throw UsageError("abelian needs --abelian");
    const auto F = field_or(c, FieldDescriptor::rational());
    const std::string action = c.action.empty() ? "wedderburn" : c.action;
    auto G = AbelianGroup::parse(c.abelian);
    if (c.format == "dot" && action != "diagram") throw UsageError("--format dot is only available for diagrams");
    std::ostringstream os;
    if (action == "wedderburn") {
        auto rep = wedderburn_counts(G, F);
        os << F.name() << "[" << G.to_text() << "] =";
        for (std::size_t k = 0; k < rep.terms.size(); ++k) {
            auto& t = rep.terms[k];
            os << (k ? " +" : "") << " " << t.copies << " " << t.field;
        }
        os << "\n";
        os << "  dimension check: " << (rep.dimension_ok ? "ok" : "FAILED") << "\n";
        if (F.kind == FieldDescriptor::Kind::Rational)
            os << "  cyclic quotient count: " << (rep.quotients_ok ? "ok" : "FAILED") << "\n";
        for (auto& cf : rep.closed_forms)
            os << "  r=" << cf.r << " oracle " << cf.oracle << ", theorem form " << cf.theorem.get_str()
               << (cf.theorem_matches ? " (matches)" : " (differs)") << ", corollary form " << cf.corollary.get_str()
               << (cf.corollary_matches ? " (matches)" : " (differs)") << "\n";
        emit(c, rep.to_json(), os.str());
        return rep.dimension_ok ? 0 : 1;
    }
    if (action == "quotients") {
        json arr = json::array();
        auto qs = cyclic_quotients(G);
        os << "cyclic quotients of " << G.to_text() << " (" << qs.size() << ")\n";
        for (auto& q : qs) {
            arr.push_back({{"d", q.d}, {"kernel_size", q.kernel.size()}, {"image", q.image}});
            os << "  d=" << q.d << "  |H|=" << q.kernel.size() << "  images";
            for (u64 v : q.image) os << " " << v;
            os << "\n";
        }
        emit(c, {{"group", G.to_text()}, {"quotients", arr}}, os.str());
        return 0;
    }
    if (action == "irreps") {
        Command d = c;
        d.field = F.name();
        return cmd_irreps(d);
    }
    if (action == "diagram") {
        auto sh = G.shapes();
        if (sh.size() != 1) fail("domain", "the rational diagram needs an abelian p-group");
        auto D = pgroup_pci_diagram_Q(sh[0]);
        if (c.format == "dot")
            std::cout << D->to_dot();
        else
            emit(c, D->to_json(), D->to_text());
        return 0;
    }
    throw UsageError("unknown abelian action '" + action + "' (wedderburn, quotients, irreps, diagram)");
}

int cmd_verify(const Command& c) {
    require_format(c, false);
    PcGroup G(load_presentation(c));
    auto D = build_pci_diagram(G, pci_options(c));
    auto reps = all_irreps(D);
    json checks = json::array();
    std::ostringstream os;
    bool all = true;
    auto record = [&](const std::string& name, bool ok, json detail = nullptr) {
        all = all && ok;
        json j{{"check", name}, {"ok", ok}};
        if (!detail.is_null()) j["detail"] = detail;
        checks.push_back(j);
        os << (ok ? "PASS " : "FAIL ") << name << "\n";
    };
    u64 sum = 0;
    for (auto& r : reps) sum += static_cast<u64>(r.degree * r.degree);
    record("sum of squared degrees = |G|", sum == G.order(), json{{"sum", sum}, {"order", G.order()}});
    record("one irrep per conjugacy class", reps.size() == G.classes(G.rank()).size());
    for (auto& r : reps) {
        auto rep = verify_rep(r);
        record("irrep " + std::to_string(r.leaf) + " relations and GT diagonality", rep.ok(), rep.to_json());
    }
    emit(c, {{"group", G.name()}, {"prime", D.prime()}, {"ok", all}, {"checks", checks}}, os.str());
    if (!all) fail("verification_failed", "some checks failed");
    return 0;
}

int dispatch(const Command& c) {
    const std::string& v = c.verb;
    const int sources = source_count(c);
    if (!c.field.empty()) FieldDescriptor::parse(c.field);
    if (v == "cyclic") {
        if (c.n == 0 || sources != 1) throw UsageError("cyclic takes exactly one source: --n");
        return cmd_cyclic(c);
    }
    if (v == "abelian") {
        if (c.abelian.empty() || sources != 1) throw UsageError("abelian takes exactly one source: --abelian");
        return cmd_abelian(c);
    }
    if (sources != 1) throw UsageError("exactly one group source is required (--catalog, --file, --abelian, --n)");
    if (!c.action.empty()) throw UsageError("verb '" + v + "' takes no action argument");
    if (v == "info") return cmd_info(c);
    if (v == "pci") return cmd_pci(c);
    if (v == "diagram") return cmd_diagram(c);
    if (v == "irreps") return cmd_irreps(c);
    if (v == "chartable") return cmd_chartable(c);
    if (v == "fclasses") return cmd_fclasses(c);
    if (v == "verify") return cmd_verify(c);
    throw UsageError("unknown verb '" + v + "'");
}

void report_error(const Command& c, const std::string& code, const std::string& msg) {
    if (c.format == "json")
        std::cout << json{{"error", {{"code", code}, {"message", msg}}}}.dump(2) << "\n";
    else
        std::cerr << "error [" << code << "]: " << msg << "\n";
}

} // namespace

int main(int argc, char** argv) {
    Command c;
    CLI::App app{"Exact representations of finite solvable groups"};
    app.add_option("verb", c.verb, "info | pci | diagram | irreps | chartable | fclasses | cyclic | abelian | verify")
        ->required()
        ->check(CLI::IsMember({"info", "pci", "diagram", "irreps", "chartable", "fclasses", "cyclic", "abelian", "verify"}));
    app.add_option("action", c.action, "cyclic: factor | irreps | pci | wedderburn; abelian: wedderburn | quotients | irreps | diagram");
    app.add_option("--catalog", c.catalog_name, "built-in group: s3, d8, q8, sl23, a4, s4, c<n>, dihedral<2n>, metacyclic<m>_<n>_<r>");
    app.add_option("--file", c.file, "presentation file");
    app.add_option("--abelian", c.abelian, "invariants of an abelian group, e.g. 4,2");
    app.add_option("--n", c.n, "cyclic group order")->check(CLI::PositiveNumber);
    app.add_option("--field", c.field, "Q, R, C or F<q>");
    app.add_option("--mode", c.mode, "cyclotomic (exact) or modl (modular only)")->check(CLI::IsMember({"modl", "cyclotomic"}));
    app.add_option("--format", c.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    app.add_option("--digits", c.digits, "numeric display digits (0 = exact)")->check(CLI::Range(0, 200));
    app.add_option("--prime", c.prime, "pin the modular prime");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error(c, "usage", e.what());
        return 2;
    }
    try {
        return dispatch(c);
    } catch (const UsageError& e) {
        report_error(c, "usage", e.what());
        return 2;
    } catch (const Error& e) {
        report_error(c, e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error(c, "internal", e.what());
        return 1;
    }
}
