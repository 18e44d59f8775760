#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lexguard/citation.hpp"
#include "support/generators.hpp"

using namespace lexguard::cite;

static const char* kSpurlingKey = "j-spurling-ltd-v-bradshaw-1956-wlr-461";

TEST_CASE("reporting-clause variants all bind to one canonical key") {
    const char* variants[] = {
        "the tribunal relied on the well-known dictum of Denning LJ in Spurling (J) Ltd. v "
        "Bradshaw [1956] 1 WLR 461, at 466, that:",
        "As Lord Denning said in J Spurling Ltd v Bradshaw [1956] 1 WLR 461 at 466:",
        "graphically described by Denning LJ in J Spurling Ltd -v- Bradshaw [1956] 1 WLR 461:",
        "observed in J. Spurling Limited v. Bradshaw [1956] 1 WLR 461 at 466:",
        "In an obiter dictum in J. Spurling Ltd. v. Bradshaw [1956] 1 W.L.R.461 at page 466 "
        "(cited in Chitty on Contracts 25th Ed. Vol. 1 at page 408) Lord Justice Denning "
        "stated that",
    };
    for (const char* text : variants) {
        CAPTURE(text);
        auto spans = detect_citations(text);
        REQUIRE(spans.size() == 1);
        const Citation& c = spans[0].citation;
        CHECK(canonical_key(c) == kSpurlingKey);
        CHECK(c.year == 1956);
        CHECK(c.series == Series::WLR);
        CHECK(c.page == 461);
    }
    // the volume digit is not part of the identity
    Citation no_vol = parse_citation("J. Spurling Ltd v Bradshaw [1956] WLR 461 at 466");
    CHECK(!no_vol.volume.has_value());
    CHECK(canonical_key(no_vol) == kSpurlingKey);
    CHECK(no_vol.pinpoint == Pinpoint{Pinpoint::Kind::Page, 466});
}

TEST_CASE("full reporter grammar battery") {
    struct Row {
        const char* text;
        const char* key;
        std::optional<int> vol;
        std::optional<Series> series;
        std::optional<int> page;
        std::optional<Pinpoint> pin;
    };
    const Row rows[] = {
        {"J. v. C. [1970] AC 668", "j-v-c-1970-ac-668", {}, Series::AC, 668, {}},
        {"Reg. v. D. [1984] A.C. 778", "reg-v-d-1984-ac-778", {}, Series::AC, 778, {}},
        {"Howes v. Bishop [1909] 2 KB 390", "howes-v-bishop-1909-kb-390", 2, Series::KB, 390,
         {}},
        {"Trollope & Colls Ltd. & ors. v. Atomic Power Constructions Ltd. [1963] 1 W.L.R. "
         "333 at page 337",
         "trollope-colls-ltd-ors-v-atomic-power-constructions-ltd-1963-wlr-333", 1,
         Series::WLR, 333, Pinpoint{Pinpoint::Kind::Page, 337}},
        {"Ruxley Electronics and Construction Ltd v Forsyth [1996] AC 344",
         "ruxley-electronics-and-construction-ltd-v-forsyth-1996-ac-344", {}, Series::AC, 344,
         {}},
        {"Salomon v A Salomon and Co Ltd [1897] AC 22",
         "salomon-v-a-salomon-and-co-ltd-1897-ac-22", {}, Series::AC, 22, {}},
        {"Macaura v Northern Assurance Co Ltd [1925] AC 619",
         "macaura-v-northern-assurance-co-ltd-1925-ac-619", {}, Series::AC, 619, {}},
        {"Allen v Flood [1898] AC 1, 96", "allen-v-flood-1898-ac-1", {}, Series::AC, 1,
         Pinpoint{Pinpoint::Kind::Page, 96}},
        {"Jones v Williams (1767) 2 Amb 651", "jones-v-williams-1767-amb-651", 2, Series::Amb,
         651, {}},
        {"Ventouris v Mountain [1991] 1 WLR 607 at 475",
         "ventouris-v-mountain-1991-wlr-607", 1, Series::WLR, 607,
         Pinpoint{Pinpoint::Kind::Page, 475}},
        {"Three Rivers DC v Bank of England (No. 6) [2005] 1 AC 610 at para 34",
         "three-rivers-dc-v-bank-of-england-no-6-2005-ac-610", 1, Series::AC, 610,
         Pinpoint{Pinpoint::Kind::Para, 34}},
        {"Wood v Capita Insurance Services Ltd [2017] AC 1173",
         "wood-v-capita-insurance-services-ltd-2017-ac-1173", {}, Series::AC, 1173, {}},
        {"Arnold v Britton [2015] AC 1619", "arnold-v-britton-2015-ac-1619", {}, Series::AC,
         1619, {}},
        {"Sandeman Coprimar SA v Transitos y Transportes Integrales SL [2003] EWCA Civ 113",
         "sandeman-coprimar-sa-v-transitos-y-transportes-integrales-sl-2003-ewca-civ-113", {},
         Series::EWCACiv, 113, {}},
        {"Cooke v Gill (1873) LR 8 CP 107", "cooke-v-gill-1873-lr-cp-107", 8, Series::LRCP,
         107, {}},
        {"Schellenberg -v- BBC [2000] EMLR 296 , 319", "schellenberg-v-bbc-2000-emlr-296", {},
         Series::EMLR, 296, Pinpoint{Pinpoint::Kind::Page, 319}},
        {"Vidal-Hall -v- Google Inc [2016] QB 1003 [136]",
         "vidal-hall-v-google-inc-2016-qb-1003", {}, Series::QB, 1003,
         Pinpoint{Pinpoint::Kind::Para, 136}},
        {"Sullivan -v- Bristol Film Studios Limited [2012] EMLR 27",
         "sullivan-v-bristol-film-studios-ltd-2012-emlr-27", {}, Series::EMLR, 27, {}},
        {"R (Quintavalle) v Secretary of State for Health [2003] UKHL 13",
         "r-quintavalle-v-secretary-of-state-for-health-2003-ukhl-13", {}, Series::UKHL, 13,
         {}},
    };
    for (const Row& r : rows) {
        CAPTURE(r.text);
        Citation c = parse_citation(r.text);
        CHECK(canonical_key(c) == r.key);
        CHECK(c.volume == r.vol);
        CHECK(c.series == r.series);
        CHECK(c.page == r.page);
        CHECK(c.pinpoint == r.pin);
    }
}

TEST_CASE("degraded forms") {
    Citation bare = parse_citation("Donoghue v Stevenson");
    CHECK(bare.party1 == "Donoghue");
    CHECK(bare.party2 == "Stevenson");
    CHECK(!bare.year);
    CHECK(canonical_key(bare) == "donoghue-v-stevenson");

    Citation yo = parse_citation("X v Y [2012]");
    CHECK(yo.year == 2012);
    CHECK(!yo.series);
    CHECK(!yo.page);
    CHECK(canonical_key(yo) == "x-v-y-2012");

    // bare citation with a trailing paragraph pinpoint
    auto spans = detect_citations("as noted in Wood v Capita at [10]. Instead, context");
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].citation.pinpoint == Pinpoint{Pinpoint::Kind::Para, 10});
    CHECK(canonical_key(spans[0].citation) == "wood-v-capita");
}

TEST_CASE("out-of-grammar strings are rejected") {
    CHECK_THROWS_AS(parse_citation("It was a sunny day"), ParseError);
    // vessel-style case name: no party pair
    CHECK_THROWS_AS(parse_citation("The Kapetan Markos N.L. (NO.2) [1987] 2 Ll. 321"),
                    ParseError);
    CHECK_THROWS_AS(parse_citation(""), ParseError);
    CHECK_THROWS_AS(parse_citation("Donoghue v Stevenson established the neighbour principle"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_citation("Wood v Capita [2017] AC 1173 and Arnold v Britton [2015] AC 1619"),
        ParseError);
}

TEST_CASE("detection in running prose with parallel citations") {
    std::string text =
        "16. The judge granted the certificate following the decision in Sandeman Coprimar "
        "SA v Transitos y Transportes Integrales SL [2003] EWCA Civ 113; [2003] QB 1270 "
        "(Sandeman). In that decision Buchanan was criticised.";
    auto spans = detect_citations(text);
    REQUIRE(spans.size() == 1);
    const auto& sp = spans[0];
    // span covers the parallel citation; parsed fields keep the primary
    CHECK(text.substr(sp.begin, sp.end - sp.begin) ==
          "Sandeman Coprimar SA v Transitos y Transportes Integrales SL [2003] EWCA Civ "
          "113; [2003] QB 1270");
    CHECK(sp.citation.series == Series::EWCACiv);
    CHECK(sp.citation.page == 113);
    CHECK(render(sp.citation) ==
          "Sandeman Coprimar SA v Transitos y Transportes Integrales SL [2003] EWCA Civ 113");

    std::string will =
        "As Lord Bingham explained in R (Quintavalle) v Secretary of State for Health "
        "[2003] UKHL 13; [2003] 2 AC 687 at paragraph 8 :";
    auto ws = detect_citations(will);
    REQUIRE(ws.size() == 1);
    CHECK(canonical_key(ws[0].citation) ==
          "r-quintavalle-v-secretary-of-state-for-health-2003-ukhl-13");
    CHECK(ws[0].citation.pinpoint == Pinpoint{Pinpoint::Kind::Para, 8});
}

TEST_CASE("detection finds multiple and bare spans with sane offsets") {
    std::string text =
        "They have been addressed by reference to previous authority, including Wood v "
        "Capita Insurance Services Ltd [2017] AC 1173 and Arnold v Britton [2015] AC 1619 . "
        "This does not involve a literalist exercise: Wood v Capita at [10]. The principle "
        "in Donoghue v Stevenson, by contrast, is tort.";
    auto spans = detect_citations(text);
    REQUIRE(spans.size() == 4);
    CHECK(canonical_key(spans[0].citation) == "wood-v-capita-insurance-services-ltd-2017-ac-1173");
    CHECK(canonical_key(spans[1].citation) == "arnold-v-britton-2015-ac-1619");
    CHECK(canonical_key(spans[2].citation) == "wood-v-capita");
    CHECK(canonical_key(spans[3].citation) == "donoghue-v-stevenson");
    for (const auto& sp : spans) {
        CHECK(sp.begin < sp.end);
        CHECK(sp.end <= text.size());
    }
    CHECK(text.substr(spans[3].begin, spans[3].end - spans[3].begin) == "Donoghue v Stevenson");

    CHECK(detect_citations("It was a sunny day: nothing legal here.").empty());
    // famous false positive we accept: any plausible party pair
    CHECK(detect_citations("Arsenal v Spurs was a classic.").size() == 1);
}

TEST_CASE("party slugs") {
    CHECK(party_slug("Spurling (J) Ltd") == "j-spurling-ltd");
    CHECK(party_slug("J Spurling Ltd") == "j-spurling-ltd");
    CHECK(party_slug("J. Spurling Limited") == "j-spurling-ltd");
    CHECK(party_slug("R (Quintavalle)") == "r-quintavalle");
    CHECK(party_slug("Bank of England (No. 6)") == "bank-of-england-no-6");
    CHECK(party_slug("Trollope & Colls Ltd. & ors.") == "trollope-colls-ltd-ors");
}

TEST_CASE("render round-trips grammar-generated citations") {
    std::mt19937 rng(40961);
    for (int iter = 0; iter < 2000; ++iter) {
        Citation c = testgen::random_citation(rng);
        std::string shown = render(c);
        CAPTURE(iter, shown);
        Citation back = parse_citation(shown);
        CHECK(canonical_key(back) == canonical_key(c));
        CHECK(back.year == c.year);
        CHECK(back.volume == c.volume);
        CHECK(back.series == c.series);
        CHECK(back.series_other == c.series_other);
        CHECK(back.page == c.page);
        CHECK(back.pinpoint == c.pinpoint);
        CHECK(back.round_year == c.round_year);
        // a second round is exact: render is a fixed point
        CHECK(render(back) == shown);
    }
}

TEST_CASE("keys are insensitive to pinpoints and connector spelling") {
    std::mt19937 rng(615);
    for (int iter = 0; iter < 300; ++iter) {
        Citation c = testgen::random_citation(rng);
        Citation no_pin = c;
        no_pin.pinpoint.reset();
        CHECK(canonical_key(c) == canonical_key(no_pin));
    }
    CHECK(canonical_key(parse_citation("Knott v Bolton")) ==
          canonical_key(parse_citation("Knott -v- Bolton")));
    CHECK(canonical_key(parse_citation("Knott v. Bolton")) ==
          canonical_key(parse_citation("Knott v Bolton")));
}
