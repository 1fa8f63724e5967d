use ods_testkit::fixtures::{read_fixture, VALID_DATASHEETS};
use ods_testkit::{gen, rng};
use opendatasheets::jsonld::{extract_rai, to_jsonld};
use opendatasheets::model::{parse_datasheet, to_canonical_json};
use opendatasheets::validation::validate_datasheet;

#[test]
fn full_fixture_matches_hand_built_document() {
    let d = parse_datasheet(&read_fixture("full.json")).unwrap();
    assert_eq!(to_jsonld(&d).to_json(), read_fixture("full.jsonld"));
}

#[test]
fn rai_sample_privacy_embedded() {
    let d = parse_datasheet(&read_fixture("rai-sample.json")).unwrap();
    let v = to_jsonld(&d).to_value();
    assert_eq!(v["ods:privacy"][0]["sensitivity"]["types"][0]["name"], "political opinions");
}

#[test]
fn valid_documents_convert_losslessly() {
    let fixtures = VALID_DATASHEETS.iter().map(|f| parse_datasheet(&read_fixture(f)).unwrap());
    let generated = (0..100).map(|s| gen::datasheet(&mut rng(s)));
    for d in fixtures.chain(generated) {
        assert!(validate_datasheet(&d).valid);
        let doc = to_jsonld(&d);
        let v = doc.to_value();
        assert_eq!(v["@type"], "Dataset");
        assert!(v["@context"].is_object());
        assert_eq!(v["distribution"].as_array().unwrap().len(), d.resources.len());
        let block = serde_json::to_value(d.rai_block()).unwrap();
        assert_eq!(to_canonical_json(&extract_rai(&v)), to_canonical_json(&block));
        assert_eq!(doc.to_json(), to_jsonld(&d).to_json());
    }
}
