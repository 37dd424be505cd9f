#include <doctest.h>

#include <json.hpp>

#include "sifa/report.hpp"

using namespace sifa;

namespace {

nlohmann::ordered_json without_timing(const std::string& text)
{
    auto j = nlohmann::ordered_json::parse(text);
    for (auto& s : j["sites"])
        s.erase("millis");
    j["summary"].erase("total_millis");
    return j;
}

VerdictReport verify(const std::string& name, unsigned jobs, bool oracle = false)
{
    VerifyOptions o;
    o.jobs = jobs;
    o.oracle = oracle;
    return run_verify(builtin_circuit(name), o);
}

}  // namespace

TEST_CASE("JSON layout")
{
    auto j = nlohmann::ordered_json::parse(report_json(verify("fig2_toy", 1)));
    CHECK(j["circuit"] == "fig2_toy");
    CHECK(j["tool_version"] == kToolVersion);
    REQUIRE(j["sites"].is_array());
    CHECK(j["sites"].size() == 14);
    auto first = j["sites"][0];
    CHECK(first["site"] == "input:a0");
    CHECK(first["verdict"] == "unknown");
    CHECK(first.contains("witness"));
    CHECK(first.contains("subset"));
    CHECK(first.contains("millis"));
    CHECK(j["summary"]["secure"].get<int>() + j["summary"]["unknown"].get<int>() +
              j["summary"]["incomplete"].get<int>() ==
          14);
}

TEST_CASE("reports do not depend on the thread count")
{
    for (const auto& name : builtin_circuit_names()) {
        CAPTURE(name);
        auto one = report_json(verify(name, 1, true));
        for (unsigned jobs : {2U, 4U, 7U}) {
            auto many = report_json(verify(name, jobs, true));
            CHECK(without_timing(one) == without_timing(many));
            CHECK(without_timing(one).dump(2) == without_timing(many).dump(2));
        }
    }
}

TEST_CASE("exit codes")
{
    CHECK(verify("chi3", 2).exit_code() == 0);
    CHECK(verify("chi3_reuse_b0", 2).exit_code() == 1);

    VerdictReport r;
    r.incomplete = 1;
    CHECK(r.exit_code() == 3);
    r.unknown = 1;
    CHECK(r.exit_code() == 1);
}

TEST_CASE("oracle labels confirmed leaks")
{
    auto r = verify("chi3_reuse_a0", 2, true);
    std::size_t confirmed = 0;
    for (const auto& s : r.sites) {
        if (s.site.id() == "gate:v0") {
            CHECK(s.verdict_label() == "confirmed-leak");
            CHECK(s.confirmed_leak);
        }
        confirmed += s.confirmed_leak ? 1 : 0;
    }
    CHECK(confirmed == 1);
    CHECK(r.unknown == 1);
}

TEST_CASE("fault_inputs off drops input sites")
{
    VerifyOptions o;
    o.fault_inputs = false;
    auto r = run_verify(builtin_circuit("chi3"), o);
    CHECK(r.sites.size() == 31);
    CHECK(r.sites.front().site.id() == "gate:m_s");
}

TEST_CASE("text report lists non-secure sites first")
{
    auto text = report_text(verify("chi3_reuse_c0", 1, true));
    auto v0 = text.find("gate:v0");
    auto secure = text.find(": secure");
    REQUIRE(v0 != std::string::npos);
    REQUIRE(secure != std::string::npos);
    CHECK(v0 < secure);
    CHECK(text.find("secret a: DEPENDENT") != std::string::npos);
}

TEST_CASE("explain walks through one site")
{
    auto fig2 = builtin_circuit("fig2_toy");
    VerifyOptions o;
    o.oracle = true;
    auto ex = explain_site(fig2, *FaultSite::parse("input:a0"), o);
    CHECK(ex.result.verdict.unknown());
    CHECK(ex.text.find("b0 | b1 | c1") != std::string::npos);
    CHECK(ex.text.find("secret b: DEPENDENT") != std::string::npos);

    auto chi3 = builtin_circuit("chi3");
    auto ms = explain_site(chi3, *FaultSite::parse("gate:m_s"));
    CHECK(ms.result.verdict.secure());
    CHECK(ms.text.find(ms.result.verdict.describe()) != std::string::npos);

    CHECK_THROWS_AS(explain_site(chi3, *FaultSite::parse("gate:nope")), std::invalid_argument);
}
