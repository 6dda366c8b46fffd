use super::conv::ConvSpec;

/// Classifier architecture and its size parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ArchSpec {
    /// Mean of word vectors, one hidden ReLU layer, output layer.
    Linear { hidden: usize },
    /// Bidirectional LSTM encoder, output layer.
    Birnn { hidden: usize },
    /// Convolution + max-pool, output layer.
    Cnn(ConvSpec),
}

impl ArchSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ArchSpec::Linear { .. } => "linear",
            ArchSpec::Birnn { .. } => "birnn",
            ArchSpec::Cnn(_) => "cnn",
        }
    }

    /// Defaults: 200 hidden units for the linear model, 100 per LSTM
    /// direction, windows {2,3,4} with 50 filters for the CNN.
    pub fn default_for(name: &str) -> Option<Self> {
        match name {
            "linear" => Some(ArchSpec::Linear { hidden: 200 }),
            "birnn" | "rnn" => Some(ArchSpec::Birnn { hidden: 100 }),
            "cnn" => Some(ArchSpec::Cnn(ConvSpec::default())),
            _ => None,
        }
    }

    /// Width of the vector fed to the output layer.
    pub fn feature_len(&self) -> usize {
        match self {
            ArchSpec::Linear { hidden } => *hidden,
            ArchSpec::Birnn { hidden } => 2 * hidden,
            ArchSpec::Cnn(spec) => spec.output_len(),
        }
    }
}

/// Trainable parameters of a classifier over `m`-dimensional word vectors
/// and `k` labels. The (frozen) embedding table is not counted.
pub fn count_parameters(arch: &ArchSpec, m: usize, k: usize) -> usize {
    let head = arch.feature_len() * k + k;
    match arch {
        ArchSpec::Linear { hidden } => m * hidden + hidden + head,
        ArchSpec::Birnn { hidden } => {
            let h = *hidden;
            2 * 4 * (m * h + h * h + 2 * h) + head
        }
        ArchSpec::Cnn(spec) => {
            spec.sizes
                .iter()
                .map(|&s| spec.filters * s * m + spec.filters)
                .sum::<usize>()
                + head
        }
    }
}
