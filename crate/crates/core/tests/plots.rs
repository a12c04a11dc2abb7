mod common;

use roxmltree::{Document, Node};

use smacofss::engine::{run, EngineConfig, MdsResult};
use smacofss::init::torgerson;
use smacofss::plot::{
    configuration_plot, dist_dhat_plot, render, shepard_plot, Axis, PlotData, PlotSpec,
};
use smacofss::{Configuration, Error};

use common::*;

fn ekman_fit(cfg: EngineConfig) -> MdsResult {
    run(&load("ekman.dist").unwrap(), &cfg, None).unwrap()
}

fn num(n: Node, attr: &str) -> f64 {
    n.attribute(attr).unwrap().parse().unwrap()
}

fn axes(doc: &Document) -> (Axis, Axis) {
    let g = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("data"))
        .unwrap();
    let parse = |attr| {
        let v: Vec<f64> = g
            .attribute(attr)
            .unwrap()
            .split(' ')
            .map(|x| x.parse().unwrap())
            .collect();
        Axis {
            lo: v[0],
            hi: v[1],
            start: v[2],
            end: v[3],
        }
    };
    (parse("data-x-map"), parse("data-y-map"))
}

fn class<'a, 'i>(doc: &'a Document<'i>, c: &'a str) -> impl Iterator<Item = Node<'a, 'i>> + 'a {
    doc.descendants()
        .filter(move |n| n.attribute("class") == Some(c))
}

fn all_kinds() -> [PlotSpec; 3] {
    [
        PlotSpec::shepard(),
        PlotSpec::configuration(),
        PlotSpec::dist_dhat(),
    ]
}

#[test]
fn documents_are_well_formed_svg() {
    let r = ekman_fit(EngineConfig {
        ordinal: true,
        ..Default::default()
    });
    let init = torgerson(&load("ekman.dist").unwrap(), 2).unwrap();
    for pd in [PlotData::from(&r), PlotData::from(&init)] {
        for spec in all_kinds() {
            let svg = render(&pd, &spec).unwrap();
            let doc = Document::parse(&svg).unwrap();
            let root = doc.root_element();
            assert_eq!(root.tag_name().name(), "svg");
            assert_eq!(
                root.tag_name().namespace(),
                Some("http://www.w3.org/2000/svg")
            );
            assert_eq!(root.attribute("version"), Some("1.1"));
            assert_eq!(root.attribute("viewBox"), Some("0 0 800 800"));
        }
    }
}

#[test]
fn canvas_coordinates_map_back_to_data() {
    let r = ekman_fit(EngineConfig::default());
    let pd = PlotData::from(&r);
    for spec in all_kinds() {
        let svg = render(&pd, &spec).unwrap();
        let doc = Document::parse(&svg).unwrap();
        let (xa, ya) = axes(&doc);
        let mut seen = 0;
        for c in doc.descendants().filter(|n| n.has_tag_name("circle")) {
            let x = xa.to_data(num(c, "cx"));
            let y = ya.to_data(num(c, "cy"));
            assert!((x - num(c, "data-x")).abs() <= 1e-6 * (xa.hi - xa.lo));
            assert!((y - num(c, "data-y")).abs() <= 1e-6 * (ya.hi - ya.lo));
            seen += 1;
        }
        assert!(seen > 0);
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = ekman_fit(EngineConfig::default());
    let b = ekman_fit(EngineConfig::default());
    for spec in all_kinds() {
        assert_eq!(
            render(&PlotData::from(&a), &spec).unwrap(),
            render(&PlotData::from(&b), &spec).unwrap()
        );
    }
}

#[test]
fn shepard_fitlines_square_to_stress_on_ekman() {
    for cfg in [
        EngineConfig::default(),
        EngineConfig {
            ordinal: true,
            ..Default::default()
        },
    ] {
        let r = ekman_fit(cfg);
        let svg = shepard_plot(&PlotData::from(&r), &PlotSpec::shepard()).unwrap();
        assert!((shepard_fitline_sum(&svg) - r.stress).abs() < 1e-9);
    }
}

#[test]
fn perfect_fit_has_zero_length_fitlines() {
    let x = conf_of(&[vec![0., 0.], vec![1., 0.], vec![1., 1.], vec![0., 1.]]);
    let d = vec![1., 1.5, 1., 1., 1.5, 1.];
    let pd = PlotData {
        delta: &d,
        dhat: &d,
        confdist: &d,
        conf: &x,
        squared: false,
    };
    let svg = shepard_plot(&pd, &PlotSpec::shepard()).unwrap();
    assert_eq!(shepard_fitline_sum(&svg), 0.0);
    let svg = dist_dhat_plot(&pd, &PlotSpec::dist_dhat()).unwrap();
    let doc = Document::parse(&svg).unwrap();
    for p in class(&doc, "point") {
        assert_eq!(num(p, "data-x"), num(p, "data-y"));
    }
    for f in class(&doc, "fitline") {
        assert_eq!(num(f, "data-x1"), num(f, "data-x2"));
        assert_eq!(num(f, "data-y1"), num(f, "data-y2"));
    }
}

#[test]
fn metric_shepard_trace_is_proportional() {
    let r = ekman_fit(EngineConfig::default());
    let svg = shepard_plot(&PlotData::from(&r), &PlotSpec::shepard()).unwrap();
    let doc = Document::parse(&svg).unwrap();
    let ratios: Vec<f64> = class(&doc, "dhat")
        .map(|n| num(n, "data-y") / num(n, "data-x"))
        .collect();
    assert_eq!(ratios.len(), 91);
    assert!(ratios.iter().all(|q| (q - ratios[0]).abs() < 1e-12));
    assert_eq!(class(&doc, "dhat-line").count(), 1);
}

#[test]
fn dist_dhat_projections_sum_to_half_the_stress() {
    for cfg in [
        EngineConfig::default(),
        EngineConfig {
            ordinal: true,
            ties: smacofss::TieApproach::Secondary,
            ..Default::default()
        },
    ] {
        let r = ekman_fit(cfg);
        let svg = dist_dhat_plot(&PlotData::from(&r), &PlotSpec::dist_dhat()).unwrap();
        let doc = Document::parse(&svg).unwrap();
        let sum: f64 = class(&doc, "fitline")
            .map(|n| {
                (num(n, "data-x1") - num(n, "data-x2")).powi(2)
                    + (num(n, "data-y1") - num(n, "data-y2")).powi(2)
            })
            .sum();
        assert!(
            (sum - r.stress / 2.0).abs() < 1e-12,
            "{sum} vs {}",
            r.stress
        );
        let id = class(&doc, "identity").next().unwrap();
        assert_eq!(num(id, "data-x1"), num(id, "data-y1"));
        assert_eq!(num(id, "data-x2"), num(id, "data-y2"));
    }
}

#[test]
fn unit_square_renders_square() {
    let x = conf_of(&[vec![0., 0.], vec![1., 0.], vec![1., 1.], vec![0., 1.]]);
    let d = [1.0; 6];
    let pd = PlotData {
        delta: &d,
        dhat: &d,
        confdist: &d,
        conf: &x,
        squared: false,
    };
    let svg = configuration_plot(&pd, &PlotSpec::configuration()).unwrap();
    let doc = Document::parse(&svg).unwrap();
    let pts: Vec<(f64, f64)> = class(&doc, "point")
        .map(|n| (num(n, "cx"), num(n, "cy")))
        .collect();
    let width = pts[1].0 - pts[0].0;
    let height = pts[0].1 - pts[3].1;
    assert!(width > 0.0 && (width - height).abs() < 1e-3);
    let (xa, ya) = axes(&doc);
    assert!(((xa.hi - xa.lo) - (ya.hi - ya.lo)).abs() < 1e-12);
}

#[test]
fn sstress_start_plots_squares() {
    let data = load("gruijter.dist").unwrap();
    let init = torgerson(&data, 2).unwrap();
    let svg = shepard_plot(&PlotData::from(&init), &PlotSpec::shepard()).unwrap();
    let doc = Document::parse(&svg).unwrap();
    let mut dhat: Vec<(f64, f64)> = class(&doc, "dhat")
        .map(|n| (num(n, "data-x"), num(n, "data-y")))
        .collect();
    dhat.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (x, y) in dhat {
        assert_eq!(y, x * x);
    }
    let mut dist: Vec<f64> = class(&doc, "dist").map(|n| num(n, "data-y")).collect();
    let mut want: Vec<f64> = init.confdist.iter().map(|d| d * d).collect();
    dist.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    assert_eq!(dist, want);
}

#[test]
fn configuration_plot_rejects_bad_requests() {
    let r = ekman_fit(EngineConfig::default());
    let pd = PlotData::from(&r);
    let cases = [
        PlotSpec {
            dim2: 3,
            ..PlotSpec::configuration()
        },
        PlotSpec {
            dim1: 2,
            ..PlotSpec::configuration()
        },
        PlotSpec {
            labels: Some(vec!["a".into(); 13]),
            ..PlotSpec::configuration()
        },
    ];
    for spec in cases {
        assert!(matches!(
            configuration_plot(&pd, &spec),
            Err(Error::Plot(_))
        ));
    }
    let one_dim = Configuration::zeros(14, 1);
    let pd1 = PlotData {
        conf: &one_dim,
        ..pd
    };
    assert!(configuration_plot(&pd1, &PlotSpec::configuration()).is_err());
}

#[test]
fn colours_and_titles_reach_the_document() {
    let r = ekman_fit(EngineConfig::default());
    let spec = PlotSpec {
        title: "Ekman <colours>".into(),
        colline: "teal".into(),
        colpoint: "Fuchsia".into(),
        ..PlotSpec::shepard()
    };
    let svg = shepard_plot(&PlotData::from(&r), &spec).unwrap();
    assert!(svg.contains("<title>Ekman &lt;colours&gt;</title>"));
    let doc = Document::parse(&svg).unwrap();
    assert!(class(&doc, "dhat").all(|n| n.attribute("fill") == Some("#008080")));
    assert!(class(&doc, "dist").all(|n| n.attribute("fill") == Some("#FF00FF")));
    assert!(class(&doc, "fitline").all(|n| n.attribute("stroke") == Some("#000000")));
}
