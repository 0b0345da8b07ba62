mod common;

use common::fixture;
use sla4oai_core::model::{ApiOperation, CostKind, HttpMethod, LimitCost, Period, Pricing, Threshold, TimeUnit, WindowKind};
use sla4oai_core::rational::{int, parse_decimal};
use sla4oai_core::sla4oai::{
    link_oas, lower_to_model, parse_document, resolve_globs, serialize_with_context, Format, OperationSet,
    StandardLoader, WriteContext,
};

fn lower(bytes: &[u8], format: Format, operations: Option<&OperationSet>) -> (Pricing, OperationSet) {
    let parsed = parse_document(bytes, format).expect("document parses");
    let operations = match operations {
        Some(ops) => ops.clone(),
        None => {
            let loader = StandardLoader::beside(&fixture("fullcontact.yaml"), false);
            link_oas(&parsed.document, None, &loader).expect("OpenAPI document links").operations
        }
    };
    let resolution = resolve_globs(&parsed.document, &operations).expect("globs resolve");
    let lowered = lower_to_model(&parsed.document, &resolution).expect("document lowers");
    (lowered.pricing, operations)
}

fn fullcontact() -> (Pricing, OperationSet) {
    lower(&std::fs::read(fixture("fullcontact.yaml")).unwrap(), Format::Auto, None)
}

#[test]
fn starter_plan_lowers_as_declared() {
    let (pricing, _) = fullcontact();
    assert_eq!(pricing.plan_count(), 2);
    let starter = pricing.plan("Starter").unwrap();
    assert_eq!(starter.cost().kind(), &CostKind::Fixed(int(99)));
    assert_eq!(starter.cost().amount(), Some(&int(99)));
    assert_eq!(starter.cost().currency(), "USD");
    assert_eq!(starter.cost().period(), Period::one(TimeUnit::Month));

    let enrich = ApiOperation::new("/v3/person.enrich", HttpMethod::Post).unwrap();
    let quota = starter
        .limitations()
        .iter()
        .find(|l| l.window() == WindowKind::Quota && l.metric() == "matches" && l.operation() == &enrich)
        .unwrap();
    assert_eq!(quota.limits()[0].threshold, Threshold::value(6000));
    let Some(LimitCost::Overage(overage)) = quota.cost() else { panic!("{:?}", quota.cost()) };
    assert_eq!(overage.overage_unit, 1);
    assert_eq!(overage.unit_cost, parse_decimal("0.006").unwrap());

    let rate = starter
        .limitations()
        .iter()
        .find(|l| l.window() == WindowKind::Rate && l.metric() == "requests" && l.operation() == &enrich)
        .unwrap();
    assert_eq!(rate.limits()[0].numeric(), Some((&int(10), Period::one(TimeUnit::Month))));
}

#[test]
fn serialize_parse_lower_is_identity() {
    let (pricing, operations) = fullcontact();
    let context = WriteContext { id: "FullContact".into(), ..WriteContext::default() };
    for format in [Format::Yaml, Format::Json] {
        let bytes = serialize_with_context(&pricing, &context, format);
        let (again, _) = lower(&bytes, format, Some(&operations));
        assert_eq!(again, pricing, "{}", String::from_utf8_lossy(&bytes));
    }
}

#[test]
fn serialized_output_is_stable() {
    let (pricing, operations) = fullcontact();
    let once = serialize_with_context(&pricing, &WriteContext::default(), Format::Yaml);
    let (again, _) = lower(&once, Format::Yaml, Some(&operations));
    assert_eq!(serialize_with_context(&again, &WriteContext::default(), Format::Yaml), once);
}
