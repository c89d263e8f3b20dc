#include "stab3/json_io.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace stab3 {

namespace {

const std::array<std::string, kNumGenerators> kGeneratorNames = {"z1", "z2", "z3",
                                                                 "zbar1", "zbar2", "zbar3"};

int generator_from_name(const std::string& name)
{
    for (int g = 0; g < kNumGenerators; ++g)
        if (kGeneratorNames[static_cast<std::size_t>(g)] == name) return g;
    throw std::invalid_argument("unknown generator name: " + name);
}

} // namespace

nlohmann::json three_form_to_json(const ThreeForm& form)
{
    nlohmann::json terms = nlohmann::json::array();
    for (int idx = 0; idx < kNumTriples; ++idx) {
        const Complex c = form[idx];
        if (c == Complex{}) continue;
        const auto triple = triple_at(idx);
        terms.push_back({{"gens",
                          {kGeneratorNames[static_cast<std::size_t>(triple[0])],
                           kGeneratorNames[static_cast<std::size_t>(triple[1])],
                           kGeneratorNames[static_cast<std::size_t>(triple[2])]}},
                         {"re", c.real()},
                         {"im", c.imag()}});
    }
    return {{"terms", std::move(terms)}};
}

ThreeForm three_form_from_json(const nlohmann::json& value)
{
    if (!value.is_object() || !value.contains("terms") || !value["terms"].is_array())
        throw std::invalid_argument("expected an object with a \"terms\" array");
    ThreeForm form;
    for (const auto& term : value["terms"]) {
        if (!term.is_object() || !term.contains("gens") || !term["gens"].is_array() ||
            term["gens"].size() != 3)
            throw std::invalid_argument("each term needs a 3-element \"gens\" array");
        const int g1 = generator_from_name(term["gens"][0].get<std::string>());
        const int g2 = generator_from_name(term["gens"][1].get<std::string>());
        const int g3 = generator_from_name(term["gens"][2].get<std::string>());
        const double re = term.value("re", 0.0);
        const double im = term.value("im", 0.0);
        form.add_term(g1, g2, g3, Complex(re, im));
    }
    return form;
}

nlohmann::json word_to_json(const GeneratorWord& word)
{
    nlohmann::json out = nlohmann::json::array();
    for (const WordFactor& factor : word) {
        if (factor.kind == WordFactor::Kind::J) {
            out.push_back({{"kind", "J"}});
            continue;
        }
        nlohmann::json rows = nlohmann::json::array();
        if (factor.is_rational()) {
            const auto& m = std::get<detail::Mat<Rational>>(factor.param);
            for (int i = 0; i < 3; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int j = 0; j < 3; ++j) row.push_back(to_string(m(i, j)));
                rows.push_back(std::move(row));
            }
        } else {
            const auto& m = std::get<Matrix3d>(factor.param);
            for (int i = 0; i < 3; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
                rows.push_back(std::move(row));
            }
        }
        out.push_back({{"kind", factor.kind == WordFactor::Kind::N ? "N" : "H"},
                       {"A", std::move(rows)}});
    }
    return out;
}

nlohmann::json group_element_to_json(const GroupElement& element)
{
    const auto matrix_rows = [](const auto& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    return {{"sp", matrix_rows(element.sp)}, {"gl2", matrix_rows(element.gl2)}};
}

nlohmann::json normal_form_result_to_json(const NormalFormResult& result)
{
    return {{"gammas", {result.gammas[0], result.gammas[1], result.gammas[2]}},
            {"group", group_element_to_json(result.group)},
            {"residuals",
             {{"gradient_norm", result.gradient_norm},
              {"off_type_norm", result.off_type_norm},
              {"reconstruction_error", result.reconstruction_error}}}};
}

namespace {

nlohmann::json crat_to_json(const CRat& z)
{
    return {{"re", to_string(z.re)}, {"im", to_string(z.im)}};
}

CRat crat_from_json(const nlohmann::json& value)
{
    if (!value.is_object() || !value.contains("re") || !value.contains("im"))
        throw std::invalid_argument("expected an object with \"re\" and \"im\" strings");
    return CRat(parse_rational(value["re"].get<std::string>()),
                parse_rational(value["im"].get<std::string>()));
}

} // namespace

nlohmann::json lattice_vec_to_json(const LatticeVec& v)
{
    nlohmann::json coords = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) coords.push_back(crat_to_json(v[i]));
    return {{"ambient", v.ambient == Ambient::E3 ? "E3" : "E2"}, {"coords", std::move(coords)}};
}

LatticeVec lattice_vec_from_json(const nlohmann::json& value)
{
    if (!value.is_object() || !value.contains("ambient") || !value.contains("coords") ||
        !value["coords"].is_array())
        throw std::invalid_argument("expected an object with \"ambient\" and a \"coords\" array");
    const std::string ambient_name = value["ambient"].get<std::string>();
    if (ambient_name != "E3" && ambient_name != "E2")
        throw std::invalid_argument("unknown ambient: " + ambient_name);
    LatticeVec v(ambient_name == "E3" ? Ambient::E3 : Ambient::E2);
    if (static_cast<int>(value["coords"].size()) != v.size())
        throw std::invalid_argument("coordinate count does not match the ambient");
    for (int i = 0; i < v.size(); ++i)
        v[i] = crat_from_json(value["coords"][static_cast<std::size_t>(i)]);
    return v;
}

nlohmann::json mirror_table_to_json(const MirrorTable& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const MirrorRow& row : table.rows)
        rows.push_back({{"charge", lattice_vec_to_json(row.charge)},
                        {"form", three_form_to_json(row.form)}});
    return {{"rows", std::move(rows)}};
}

nlohmann::json charge_functional_to_json(const LatticeVec& w)
{
    nlohmann::json values = nlohmann::json::array();
    for (const CRat& z : mukai_dual_coordinates(w)) values.push_back(crat_to_json(z));
    return {{"mukai_dual", std::move(values)}};
}

GeneratorWord word_from_json(const nlohmann::json& value)
{
    if (!value.is_array()) throw std::invalid_argument("expected an array of factors");
    GeneratorWord word;
    for (const auto& entry : value) {
        if (!entry.is_object() || !entry.contains("kind"))
            throw std::invalid_argument("each factor needs a \"kind\"");
        const std::string kind = entry["kind"].get<std::string>();
        if (kind == "J") {
            word.push_back(WordFactor::j());
            continue;
        }
        if (kind != "N" && kind != "H") throw std::invalid_argument("unknown factor kind: " + kind);
        if (!entry.contains("A") || !entry["A"].is_array() || entry["A"].size() != 3)
            throw std::invalid_argument("factor needs a 3x3 \"A\" matrix");

        bool all_strings = true;
        bool all_numbers = true;
        for (const auto& row : entry["A"]) {
            if (!row.is_array() || row.size() != 3)
                throw std::invalid_argument("factor needs a 3x3 \"A\" matrix");
            for (const auto& cell : row) {
                all_strings = all_strings && cell.is_string();
                all_numbers = all_numbers && cell.is_number();
            }
        }
        WordFactor factor;
        factor.kind = kind == "N" ? WordFactor::Kind::N : WordFactor::Kind::H;
        if (all_strings) {
            detail::Mat<Rational> m(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m(i, j) = parse_rational(entry["A"][static_cast<std::size_t>(i)]
                                                     [static_cast<std::size_t>(j)].get<std::string>());
            factor.param = std::move(m);
        } else if (all_numbers) {
            Matrix3d m;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m(i, j) = entry["A"][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                                  .get<double>();
            factor.param = m;
        } else {
            throw std::invalid_argument("matrix entries must be all strings or all numbers");
        }
        word.push_back(std::move(factor));
    }
    return word;
}

} // namespace stab3
