#include "doctest.h"

#include "sympidx/index.hpp"
#include "sympidx/path_json.hpp"
#include "sympidx/suites.hpp"

using namespace sympidx;

TEST_CASE("path documents round trip losslessly") {
    Rng rng(9);
    for (int c = 0; c < 30; ++c) {
        const auto s = random_path_spec(rng, 1 + c % 3);
        const std::string a = dump_path_document(s);
        const auto back = parse_path_document(a);
        CHECK(dump_path_document(back) == a);
    }
    Mat c = Mat::Identity(2, 2);
    c(0, 1) = 0.1 + 1e-17;
    auto nested = spec::half_period_extend(spec::product(
        {spec::conjugate(c, spec::rotation(-1.0 / 3.0, 0.5)), spec::inverse(spec::shear(-1e-3, 0.5))}));
    auto doc = dump_path_document(spec::loop_multiply(2, spec::iterate(nested, 3)));
    auto parsed = parse_path_document(doc);
    CHECK(dump_path_document(parsed) == doc);
    CHECK(cz_index(realize(parsed)) == cz_index(realize(parse_path_document(doc))));
}

TEST_CASE("schema errors") {
    CHECK_THROWS_AS(parse_path_document("{}"), Error);
    CHECK_THROWS_AS(parse_path_document(R"({"schema_version": 2, "path": {"type": "rotation", "duration": 1, "weight": 1}})"),
                    Error);
    CHECK_THROWS_AS(parse_path_document(R"({"schema_version": 1, "path": {"type": "spiral", "duration": 1}})"), Error);
    CHECK_THROWS_AS(parse_path_document("not json"), Error);
    try {
        parse_path_document(R"({"schema_version": 1, "path": {"type": "shear", "duration": -1, "slope": 1}})");
        FAIL("accepted a negative duration");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Schema);
    }
}
