use khtext::core::embedding::{cosine, train, EmbeddingHyper, Matrix, Mode, RowStore};
use khtext::core::textproc::{SubwordConfig, Unit};
use khtext::hogwild::{train_parallel, SharedMatrix};
use khtext::synth::two_family_corpus;

fn hyper(mode: Mode, seed: u64) -> EmbeddingHyper {
    let mut h = EmbeddingHyper::new(mode);
    h.dim = 16;
    h.min_count = 1;
    h.seed = seed;
    h.subword = SubwordConfig { buckets: 5_000, ..SubwordConfig::for_unit(Unit::Kcc) };
    h
}

#[test]
fn shared_matrix_matches_dense() {
    let data: Vec<f32> = (0..12).map(|i| i as f32 * 0.5 - 2.0).collect();
    let mut dense = Matrix::from_vec(4, 3, data.clone());
    let shared = SharedMatrix::from_matrix(Matrix::from_vec(4, 3, data));
    let mut s = &shared;
    dense.add_row(2, 0.25, &[1.0, -2.0, 4.0]);
    s.add_row(2, 0.25, &[1.0, -2.0, 4.0]);
    let mut a = vec![0.0; 3];
    let mut b = vec![0.0; 3];
    for r in 0..4 {
        dense.read_row(r, &mut a);
        s.read_row(r, &mut b);
        assert_eq!(a, b);
    }
    assert_eq!(s.dim(), 3);
    assert_eq!(shared.into_matrix(), dense);
}

#[test]
fn one_thread_is_the_deterministic_trainer() {
    let (corpus, _) = two_family_corpus(200, 10, 8, 1);
    let h = hyper(Mode::Skipgram, 3);
    let (a, ra) = train_parallel(&corpus, &h, 1).unwrap();
    let (b, rb) = train(&corpus, &h).unwrap();
    assert_eq!(a.input_matrix(), b.input_matrix());
    assert_eq!(a.output_matrix(), b.output_matrix());
    assert_eq!(ra, rb);
}

#[test]
fn parallel_training_learns_families() {
    for mode in [Mode::Cbow, Mode::Skipgram] {
        let (corpus, fams) = two_family_corpus(2_000, 20, 10, 7);
        let (model, report) = train_parallel(&corpus, &hyper(mode, 7), 4).unwrap();
        assert_eq!(report.epoch_loss.len(), 5);
        assert!(report.epoch_loss.iter().all(|l| l.is_finite()));
        let v = |t: &str| model.word_vector(t).unwrap().values;
        let (mut intra, mut inter, mut ni, mut nx) = (0.0, 0.0, 0, 0);
        for (fa, a) in fams.iter().enumerate() {
            for (fb, b) in fams.iter().enumerate() {
                for x in a {
                    for y in b {
                        if x == y {
                            continue;
                        }
                        let c = cosine(&v(x), &v(y));
                        if fa == fb {
                            intra += c;
                            ni += 1;
                        } else {
                            inter += c;
                            nx += 1;
                        }
                    }
                }
            }
        }
        assert!(intra / ni as f64 > inter / nx as f64, "{mode:?}");
    }
}

#[test]
fn parallel_edge_cases() {
    let h = hyper(Mode::Cbow, 0);
    let corpus = vec!["ក ខ".to_string()];
    let (model, _) = train_parallel(&corpus, &h, 8).unwrap();
    assert_eq!(model.vocab().len(), 2);
    let (_, report) = train_parallel(&corpus, &EmbeddingHyper { epochs: 0, ..h.clone() }, 3).unwrap();
    assert!(report.epoch_loss.is_empty());
    assert!(train_parallel(&Vec::<String>::new(), &h, 2).is_err());
}
