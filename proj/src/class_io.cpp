#include "eqlearn/class_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace eqlearn {

using ordered_json = nlohmann::ordered_json;

namespace {

const ordered_json& require(const ordered_json& doc, const char* field)
{
    auto it = doc.find(field);
    if (it == doc.end())
        throw ValidationError(ValidationErrorKind::missing_field, std::string("class file lacks field '") + field + "'");
    return *it;
}

std::vector<Rational> parse_weights(const ordered_json& arr, const char* field, ValidationErrorKind kind)
{
    if (!arr.is_array())
        throw ValidationError(kind, std::string("'") + field + "' must be an array of rational strings");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& w = arr[i];
        if (!w.is_string())
            throw ValidationError(kind, std::string(field) + "[" + std::to_string(i) + "] is not a string");
        try {
            out.push_back(parse_rational(w.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(kind, std::string(field) + "[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return out;
}

} // namespace

ClassFile parse_class_file(std::string_view text)
{
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(ValidationErrorKind::malformed_json, e.what(), e.byte);
    }
    if (!doc.is_object())
        throw ValidationError(ValidationErrorKind::malformed_json, "class file must be a JSON object");

    const auto& jdomain = require(doc, "domain");
    if (!jdomain.is_array())
        throw ValidationError(ValidationErrorKind::missing_field, "'domain' must be an array of point names");
    std::vector<std::string> points;
    for (const auto& p : jdomain) {
        if (!p.is_string())
            throw ValidationError(ValidationErrorKind::missing_field, "point names must be strings");
        points.push_back(p.get<std::string>());
    }
    auto weights = parse_weights(require(doc, "mu"), "mu", ValidationErrorKind::malformed_weight);
    auto domain = std::make_shared<const Domain>(std::move(points), std::move(weights));

    const auto& jconcepts = require(doc, "concepts");
    if (!jconcepts.is_object())
        throw ValidationError(ValidationErrorKind::missing_field, "'concepts' must be an object of label -> bitstring");
    std::vector<Concept> concepts;
    std::vector<std::string> labels;
    for (const auto& [label, bits] : jconcepts.items()) {
        if (!bits.is_string())
            throw ValidationError(ValidationErrorKind::malformed_bitstring, "concept '" + label + "' is not a bitstring");
        concepts.push_back(Concept::from_bitstring(bits.get<std::string>()));
        labels.push_back(label);
    }
    ClassFile out{ConceptClass(domain, std::move(concepts), std::move(labels)), std::nullopt};

    if (auto it = doc.find("tau"); it != doc.end()) {
        auto tau = parse_weights(*it, "tau", ValidationErrorKind::malformed_prior);
        if (tau.size() != out.cls.size())
            throw ValidationError(ValidationErrorKind::malformed_prior, "'tau' must have one weight per concept");
        Rational total = 0;
        for (const auto& t : tau) {
            if (t < 0)
                throw ValidationError(ValidationErrorKind::malformed_prior, "'tau' weights must be nonnegative");
            total += t;
        }
        if (total != 1)
            throw ValidationError(ValidationErrorKind::malformed_prior, "'tau' sums to " + to_string(total) + ", not 1");
        out.tau = std::move(tau);
    }
    return out;
}

ClassFile read_class_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open class file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_class_file(buf.str());
}

ConceptClass load_class(std::string_view text) { return parse_class_file(text).cls; }

std::string save_class(const ConceptClass& cls, const std::optional<std::vector<Rational>>& tau)
{
    ordered_json doc;
    doc["domain"] = cls.domain().points();
    ordered_json mu = ordered_json::array();
    for (const auto& w : cls.domain().weights())
        mu.push_back(to_string(w));
    doc["mu"] = std::move(mu);
    ordered_json concepts = ordered_json::object();
    for (std::size_t i = 0; i < cls.size(); ++i)
        concepts[cls.label(i)] = cls.concept_at(i).to_bitstring();
    doc["concepts"] = std::move(concepts);
    if (tau) {
        ordered_json t = ordered_json::array();
        for (const auto& w : *tau)
            t.push_back(to_string(w));
        doc["tau"] = std::move(t);
    }
    return doc.dump(2) + "\n";
}

void write_class_file(const std::filesystem::path& path, const ConceptClass& cls)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write class file '" + path.string() + "'");
    out << save_class(cls);
}

} // namespace eqlearn
