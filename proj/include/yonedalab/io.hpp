#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "homalg.hpp"

namespace yl {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- documents

struct Document {
    std::string source;  // file path or "<string>"
    toml::table root;
};

inline Document parse_document(std::string_view text, const std::string& source = "<string>") {
    try {
        return Document{source, toml::parse(text, source)};
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source << ": " << e.description() << " (line " << e.source().begin.line << ")";
        throw InputError(os.str());
    }
}

inline Document load_document(const std::string& path) {
    if (!std::filesystem::exists(path)) throw InputError(path + ": no such file");
    try {
        return Document{path, toml::parse_file(path)};
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << path << ": " << e.description() << " (line " << e.source().begin.line << ")";
        throw InputError(os.str());
    }
}

inline bool defines_algebra(const Document& d) {
    return d.root.contains("quiver") || d.root.contains("basis");
}

// 0 means the rationals
inline unsigned characteristic(const Document& d) {
    auto c = d.root["field"]["characteristic"].value<std::int64_t>();
    if (!c) throw InputError(d.source + ": [field] characteristic is missing");
    if (*c < 0) throw InputError(d.source + ": negative characteristic");
    return static_cast<unsigned>(*c);
}

inline std::string algebra_name(const Document& d) {
    if (auto n = d.root["name"].value<std::string>()) return *n;
    return std::filesystem::path(d.source).stem().string();
}

namespace io_detail {

inline mpq_class scalar(const toml::node& n, const std::string& where) {
    if (auto i = n.value_exact<std::int64_t>()) return mpq_class(mpz_class(std::to_string(*i)));
    if (auto s = n.value_exact<std::string>()) {
        try {
            mpq_class q(*s);
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            throw InputError(where + ": '" + *s + "' is not a rational number");
        }
    }
    throw InputError(where + ": coefficients must be integers or strings \"p/q\"");
}

inline const toml::array& array(const toml::node* n, const std::string& where) {
    if (!n || !n->is_array()) throw InputError(where + ": expected an array");
    return *n->as_array();
}

inline const toml::table& table(const toml::node* n, const std::string& where) {
    if (!n || !n->is_table()) throw InputError(where + ": expected a table");
    return *n->as_table();
}

inline std::string string(const toml::node& n, const std::string& where) {
    auto s = n.value_exact<std::string>();
    if (!s) throw InputError(where + ": expected a string");
    return *s;
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

// rows of rationals
inline std::vector<std::vector<mpq_class>> rational_matrix(const toml::node* n, const std::string& where) {
    std::vector<std::vector<mpq_class>> rows;
    for (auto& r : array(n, where)) {
        std::vector<mpq_class> row;
        for (auto& x : array(&r, where)) row.push_back(scalar(x, where));
        if (!rows.empty() && row.size() != rows[0].size()) throw InputError(where + ": ragged matrix");
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class F>
Matrix<F> to_matrix(const F& f, const std::vector<std::vector<mpq_class>>& rows, std::size_t r, std::size_t c,
                    const std::string& where) {
    // an empty array stands for the zero matrix of any shape
    if (rows.empty()) return Matrix<F>(f, r, c);
    if (rows.size() != r || rows[0].size() != c)
        throw InputError(where + ": expected a " + std::to_string(r) + "x" + std::to_string(c) + " matrix");
    Matrix<F> m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            try {
                m(i, j) = f.from_ratio(rows[i][j]);
            } catch (const std::domain_error& e) {
                throw InputError(where + ": " + e.what());
            }
        }
    return m;
}

// terms [[coeff, "label"], ...] or [[coeff, "b a"], ...]
inline std::vector<std::pair<mpq_class, std::string>> terms(const toml::node* n, const std::string& where) {
    std::vector<std::pair<mpq_class, std::string>> out;
    for (auto& t : array(n, where)) {
        auto& pr = array(&t, where);
        if (pr.size() != 2) throw InputError(where + ": a term is [coefficient, word]");
        out.emplace_back(scalar(*pr.get(0), where), string(*pr.get(1), where));
    }
    return out;
}

} // namespace io_detail

inline QuiverPresentation parse_quiver(const Document& d) {
    using namespace io_detail;
    const std::string w = d.source + ": [quiver]";
    auto& q = table(d.root.get("quiver"), w);
    QuiverPresentation P;
    std::map<std::string, int> vid;
    for (auto& v : array(q.get("vertices"), w + " vertices")) {
        std::string name = v.is_integer() ? std::to_string(*v.value<std::int64_t>()) : string(v, w + " vertices");
        if (!vid.emplace(name, static_cast<int>(P.vertices.size())).second) throw InputError(w + ": vertex repeated: " + name);
        P.vertices.push_back(name);
    }
    auto vertex = [&](const toml::node* n, const std::string& arrow) {
        if (!n) throw InputError(w + ": arrow " + arrow + " needs source and target");
        std::string s = n->is_integer() ? std::to_string(*n->value<std::int64_t>()) : string(*n, w);
        auto it = vid.find(s);
        if (it == vid.end()) throw InputError(w + ": arrow " + arrow + " has an unknown endpoint " + s);
        return it->second;
    };
    if (auto* arr = q.get("arrows"))
        for (auto& a : array(arr, w + " arrows")) {
            auto& t = table(&a, w + " arrows");
            std::string name = string(*t.get("name"), w + " arrow name");
            P.arrows.push_back(Arrow{name, vertex(t.get("source"), name), vertex(t.get("target"), name)});
        }
    if (auto* rels = q.get("relations"))
        for (auto& r : array(rels, w + " relations")) {
            std::vector<std::pair<mpq_class, std::vector<std::string>>> rel;
            for (auto& [c, word] : terms(&r, w + " relations")) rel.emplace_back(c, words(word));
            P.relations.push_back(std::move(rel));
        }
    if (auto m = q["max_length"].value<std::int64_t>()) P.max_length = static_cast<int>(*m);
    return P;
}

// [basis] labels, [idempotents] labels (one per vertex), [structure] "i j" = [[c, "k"], ...]
template <class F>
Algebra<F> parse_structure(const F& f, const Document& d) {
    using namespace io_detail;
    const std::string w = d.source;
    std::vector<std::string> labels;
    std::map<std::string, int> id;
    for (auto& l : array(d.root["basis"]["labels"].node(), w + ": [basis] labels")) {
        auto s = string(l, w + ": [basis] labels");
        if (!id.emplace(s, static_cast<int>(labels.size())).second) throw InputError(w + ": basis label repeated: " + s);
        labels.push_back(s);
    }
    auto lookup = [&](const std::string& s, const std::string& where) {
        auto it = id.find(s);
        if (it == id.end()) throw InputError(where + ": unknown basis label " + s);
        return it->second;
    };
    std::vector<int> idem;
    for (auto& l : array(d.root["idempotents"]["labels"].node(), w + ": [idempotents] labels"))
        idem.push_back(lookup(string(l, w + ": [idempotents]"), w + ": [idempotents]"));
    int n = static_cast<int>(labels.size());
    std::vector<std::vector<SVec<F>>> mult(n, std::vector<SVec<F>>(n));
    if (auto* st = d.root.get("structure"))
        for (auto& [key, val] : table(st, w + ": [structure]")) {
            std::string where = w + ": [structure] \"" + std::string(key.str()) + "\"";
            auto ij = words(std::string(key.str()));
            if (ij.size() != 2) throw InputError(where + ": key must be two basis labels \"i j\"");
            int i = lookup(ij[0], where), j = lookup(ij[1], where);
            std::map<int, mpq_class> acc;
            for (auto& [c, k] : terms(&val, where)) acc[lookup(k, where)] += c;
            SVec<F> v;
            for (auto& [k, c] : acc) {
                auto x = f.from_ratio(c);
                if (!f.is_zero(x)) v.emplace_back(k, x);
            }
            mult[i][j] = std::move(v);
        }
    return Algebra<F>(f, std::move(labels), std::move(mult), std::move(idem));
}

template <class F>
Algebra<F> build_algebra(const F& f, const Document& d) {
    try {
        if (d.root.contains("quiver")) return quiver_to_algebra(f, parse_quiver(d));
        if (d.root.contains("basis")) return parse_structure(f, d);
    } catch (const AlgebraError& e) {
        throw AlgebraError("algebra " + algebra_name(d) + ": " + e.what());
    }
    throw InputError(d.source + ": neither [quiver] nor [basis] is present");
}

// Calls fn with Fp(p) or Qf according to [field].
template <class Fn>
auto with_field(const Document& d, Fn&& fn) {
    unsigned c = characteristic(d);
    if (c == 0) return fn(Qf{});
    try {
        Fp f(c);
        return fn(f);
    } catch (const std::invalid_argument& e) {
        throw InputError(d.source + ": " + e.what());
    }
}

// ---------------------------------------------------------------- workspace

// Owns the algebra and resolves module and complex names. Module names are
// looked up in [modules.NAME] tables first, then among the built-ins:
// k (one vertex only), Lambda, S<i>, P<i>, I<i> with i the 1-based vertex index.
template <class F>
class Workspace {
public:
    Workspace(const F& f, Document d) : doc_(std::move(d)), A_(std::make_unique<Algebra<F>>(build_algebra(f, doc_))) {
        if (doc_.root.contains("quiver")) {
            for (auto& v : parse_quiver(doc_).vertices) vnames_.push_back(v);
        } else {
            for (int v = 0; v < A_->vertices(); ++v) vnames_.push_back(A_->label(A_->idempotent(v)));
        }
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    const Algebra<F>& algebra() const { return *A_; }
    const Document& document() const { return doc_; }
    std::string name() const { return algebra_name(doc_); }

    std::vector<std::string> defined_modules() const { return keys("modules"); }
    std::vector<std::string> defined_complexes() const { return keys("complexes"); }

    Module<F> module(const std::string& name) const { return module_in(doc_, name); }

    // a complex: a file with [complex], a [complexes.NAME] table, or a module as a stalk in degree 0
    Complex<F> complex(const std::string& spec) const {
        if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".toml") {
            Document cd = load_document(spec);
            auto* t = cd.root.get("complex");
            if (!t) throw InputError(spec + ": no [complex] table");
            return complex_from(cd, io_detail::table(t, spec + ": [complex]"), std::filesystem::path(spec).stem().string());
        }
        if (auto* t = doc_.root["complexes"][spec].node())
            return complex_from(doc_, io_detail::table(t, doc_.source + ": [complexes." + spec + "]"), spec);
        return stalk(module(spec));
    }

private:
    Document doc_;
    std::unique_ptr<Algebra<F>> A_;
    std::vector<std::string> vnames_;

    std::vector<std::string> keys(const char* section) const {
        std::vector<std::string> out;
        if (auto* t = doc_.root[section].as_table())
            for (auto& [k, v] : *t) out.emplace_back(k.str());
        return out;
    }

    int vertex_index(const toml::node& n, const std::string& where) const {
        return vertex_index(n.is_integer() ? std::to_string(*n.value<std::int64_t>()) : io_detail::string(n, where), where);
    }
    int vertex_index(const std::string& s, const std::string& where) const {
        for (std::size_t v = 0; v < vnames_.size(); ++v)
            if (vnames_[v] == s) return static_cast<int>(v);
        throw InputError(where + ": unknown vertex " + s);
    }

    int label_index(const std::string& s, const std::string& where) const {
        for (int b = 0; b < A_->dim(); ++b)
            if (A_->label(b) == s) return b;
        throw InputError(where + ": unknown basis element " + s);
    }

    std::optional<Module<F>> builtin(const std::string& name) const {
        const auto& A = *A_;
        if (name == "Lambda") return regular_module(A);
        if (name == "k") {
            if (A.vertices() != 1) throw InputError("module k: the algebra has " + std::to_string(A.vertices()) + " vertices; use S1, S2, ...");
            return simple_module(A, 0);
        }
        if (name.size() >= 2 && (name[0] == 'S' || name[0] == 'P' || name[0] == 'I') &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            int v = std::stoi(name.substr(1)) - 1;
            if (v < 0 || v >= A.vertices()) throw InputError("module " + name + ": vertex index out of range");
            if (name[0] == 'S') return simple_module(A, v);
            if (name[0] == 'P') return projective_module(A, v);
            return injective_module(A, v);
        }
        return std::nullopt;
    }

    Module<F> module_in(const Document& d, const std::string& name) const {
        if (auto* t = d.root["modules"][name].node())
            return parse_module(io_detail::table(t, d.source + ": [modules." + name + "]"), name);
        if (&d != &doc_)
            if (auto* t = doc_.root["modules"][name].node())
                return parse_module(io_detail::table(t, doc_.source + ": [modules." + name + "]"), name);
        if (auto m = builtin(name)) return *m;
        throw InputError("module " + name + ": not defined and not a built-in name");
    }

    // dim + action matrices for some basis elements, or dims per vertex + arrow maps;
    // the remaining actions follow from the products.
    Module<F> parse_module(const toml::table& t, const std::string& name) const {
        return make_module(*A_, parse_actions(t, name), name);
    }

    std::vector<Matrix<F>> parse_actions(const toml::table& t, const std::string& name) const {
        using namespace io_detail;
        const auto& A = *A_;
        const F& f = A.field();
        const std::string w = "module " + name;
        std::vector<std::optional<Matrix<F>>> act(A.dim());
        std::size_t dim = 0;
        if (auto* dims = t.get("dims")) {
            // representation: vertex spaces in vertex order, arrows as block maps
            std::vector<std::size_t> vd(A.vertices(), 0), off(A.vertices(), 0);
            for (auto& [k, v] : table(dims, w + " dims")) {
                auto c = v.template value<std::int64_t>();
                if (!c || *c < 0) throw InputError(w + ": dims must be non-negative integers");
                vd[vertex_index(std::string(k.str()), w)] = static_cast<std::size_t>(*c);
            }
            for (int v = 0; v < A.vertices(); ++v) { off[v] = dim; dim += vd[v]; }
            for (int v = 0; v < A.vertices(); ++v) {
                Matrix<F> e(f, dim, dim);
                for (std::size_t i = 0; i < vd[v]; ++i) e(off[v] + i, off[v] + i) = f.one();
                act[A.idempotent(v)] = e;
            }
            if (auto* maps = t.get("maps"))
                for (auto& [k, v] : table(maps, w + " maps")) {
                    std::string where = w + " map " + std::string(k.str());
                    int b = label_index(std::string(k.str()), where);
                    int s = A.right(b), g = A.left(b);
                    auto blk = to_matrix(f, rational_matrix(&v, where), vd[g], vd[s], where);
                    Matrix<F> m(f, dim, dim);
                    for (std::size_t i = 0; i < vd[g]; ++i)
                        for (std::size_t j = 0; j < vd[s]; ++j) m(off[g] + i, off[s] + j) = blk(i, j);
                    act[b] = m;
                }
        } else {
            auto d = t["dim"].value<std::int64_t>();
            if (!d || *d < 0) throw InputError(w + ": dim is missing");
            dim = static_cast<std::size_t>(*d);
            if (auto* vs = t.get("vertex")) {
                auto& arr = array(vs, w + " vertex");
                if (arr.size() != dim) throw InputError(w + ": vertex list has the wrong length");
                std::vector<Matrix<F>> e(A.vertices(), Matrix<F>(f, dim, dim));
                for (std::size_t i = 0; i < dim; ++i) e[vertex_index(*arr.get(i), w)](i, i) = f.one();
                for (int v = 0; v < A.vertices(); ++v) act[A.idempotent(v)] = e[v];
            } else if (A.vertices() == 1) {
                act[A.idempotent(0)] = Matrix<F>::identity(f, dim);
            }
            if (auto* ac = t.get("action"))
                for (auto& [k, v] : table(ac, w + " action")) {
                    std::string where = w + " action " + std::string(k.str());
                    act[label_index(std::string(k.str()), where)] = to_matrix(f, rational_matrix(&v, where), dim, dim, where);
                }
        }
        close_actions(act, dim, w);
        std::vector<Matrix<F>> full;
        for (auto& m : act) full.push_back(*m);
        return full;
    }

    // fill in missing action matrices from rho(b_i) rho(b_j) = rho(b_i b_j) and the unit
    void close_actions(std::vector<std::optional<Matrix<F>>>& act, std::size_t dim, const std::string& w) const {
        const auto& A = *A_;
        const F& f = A.field();
        bool changed = true;
        while (changed) {
            changed = false;
            int missing_idem = -1, nmissing = 0;
            for (int v = 0; v < A.vertices(); ++v)
                if (!act[A.idempotent(v)]) { missing_idem = v; ++nmissing; }
            if (nmissing == 1) {
                Matrix<F> e = Matrix<F>::identity(f, dim);
                for (int v = 0; v < A.vertices(); ++v)
                    if (v != missing_idem) e = e - *act[A.idempotent(v)];
                act[A.idempotent(missing_idem)] = e;
                changed = true;
            }
            for (int i = 0; i < A.dim(); ++i)
                for (int j = 0; j < A.dim(); ++j) {
                    if (!act[i] || !act[j]) continue;
                    int unknown = -1, count = 0;
                    for (auto& [k, c] : A.prod(i, j))
                        if (!act[k]) { unknown = static_cast<int>(k); ++count; }
                    if (count != 1) continue;
                    Matrix<F> m = *act[i] * *act[j];
                    Val<F> ck = f.zero();
                    for (auto& [k, c] : A.prod(i, j)) {
                        if (static_cast<int>(k) == unknown) ck = c;
                        else m = m - act[k]->scaled(c);
                    }
                    act[unknown] = m.scaled(f.inv(ck));
                    changed = true;
                }
        }
        for (int b = 0; b < A.dim(); ++b)
            if (!act[b]) throw InputError(w + ": the action of " + A.label(b) + " is not determined by the given matrices");
    }

    Complex<F> complex_from(const Document& d, const toml::table& t, const std::string& label) const {
        using namespace io_detail;
        const std::string w = "complex " + label;
        Complex<F> X;
        X.A = A_.get();
        X.label = label;
        auto lo = t["lo"].value<std::int64_t>();
        if (!lo) throw InputError(w + ": lo is missing");
        X.lo = static_cast<int>(*lo);
        for (auto& m : array(t.get("modules"), w + " modules")) {
            auto name = string(m, w + " modules");
            auto M = module_in(d, name);
            if (!adapted_as_given(d, name)) throw InputError(w + ": module " + name + " is not given in a vertex-adapted basis");
            X.comp.push_back(std::move(M));
        }
        const F& f = A_->field();
        std::size_t nd = X.comp.empty() ? 0 : X.comp.size() - 1;
        auto* ds = t.get("differentials");
        std::size_t given = ds ? array(ds, w + " differentials").size() : 0;
        if (given != nd) throw InputError(w + ": expected " + std::to_string(nd) + " differential matrices, got " + std::to_string(given));
        for (std::size_t i = 0; i < nd; ++i) {
            std::string where = w + " differential in degree " + std::to_string(X.lo + static_cast<int>(i));
            auto m = to_matrix(f, rational_matrix(array(ds, w).get(i), where), X.comp[i + 1].dim, X.comp[i].dim, where);
            X.d.push_back(SparseMatrix<F>::from_dense(m));
        }
        validate_complex(X);
        return X;
    }

    // make_module keeps the given basis iff every idempotent acts diagonally by 0/1
    bool adapted_as_given(const Document& d, const std::string& name) const {
        const toml::node* n = d.root["modules"][name].node();
        if (!n && &d != &doc_) n = doc_.root["modules"][name].node();
        if (!n) return true;
        auto act = parse_actions(*n->as_table(), name);
        const F& f = A_->field();
        for (int v = 0; v < A_->vertices(); ++v) {
            auto& e = act[A_->idempotent(v)];
            for (std::size_t i = 0; i < e.rows(); ++i)
                for (std::size_t j = 0; j < e.cols(); ++j) {
                    auto x = e(i, j);
                    if (i != j ? !f.is_zero(x) : !(f.is_zero(x) || f.is_one(x))) return false;
                }
        }
        return true;
    }
};

// ---------------------------------------------------------------- output

enum class Format { table, json, csv };

inline Format parse_format(const std::string& s) {
    if (s == "table") return Format::table;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw InputError("unknown output format " + s);
}

struct Row {
    int degree = 0;
    long long value = 0;
    bool stable = true;
    std::optional<int> stage;
};

struct Report {
    std::string command;
    std::string algebra;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::vector<Row> table;
    std::vector<std::string> warnings;
    nlohmann::ordered_json details;  // null when absent
    std::string message;              // free text for the table format
};

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["algebra"] = r.algebra;
    j["parameters"] = r.parameters;
    j["table"] = nlohmann::ordered_json::array();
    for (auto& row : r.table) {
        nlohmann::ordered_json o;
        o["degree"] = row.degree;
        o["value"] = row.value;
        o["stable"] = row.stable;
        o["stage"] = row.stage ? nlohmann::ordered_json(*row.stage) : nlohmann::ordered_json(nullptr);
        j["table"].push_back(o);
    }
    j["warnings"] = r.warnings;
    if (!r.details.is_null()) j["details"] = r.details;
    return j;
}

// csv carries only the table; warnings are reported separately by the caller
inline std::string render(const Report& r, Format fmt) {
    std::ostringstream os;
    if (fmt == Format::json) {
        os << to_json(r).dump(2) << "\n";
        return os.str();
    }
    if (fmt == Format::csv) {
        os << "degree,value,stable,stage\n";
        for (auto& row : r.table)
            os << row.degree << "," << row.value << "," << (row.stable ? "true" : "false") << ","
               << (row.stage ? std::to_string(*row.stage) : "") << "\n";
        return os.str();
    }
    os << r.command << " [" << r.algebra << "]";
    for (auto& [k, v] : r.parameters.items()) os << "  " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    os << "\n";
    if (!r.table.empty()) {
        os << "degree\tvalue\tstable\tstage\n";
        for (auto& row : r.table)
            os << row.degree << "\t" << row.value << "\t" << (row.stable ? "yes" : "no") << "\t"
               << (row.stage ? std::to_string(*row.stage) : "-") << "\n";
    }
    if (!r.details.is_null())
        for (auto& [k, v] : r.details.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    if (!r.message.empty()) os << r.message << "\n";
    for (auto& w : r.warnings) os << "warning: " << w << "\n";
    return os.str();
}

} // namespace yl
