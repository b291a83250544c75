"""
Calibrate the decoder on the training split of a dataset.
"""
from eeg.config import load_pipeline_config
from eeg.io import file_sha256, read_dataset
from eeg.management.base import BtsCommand
from eeg.types import Vocabulary

from decoding.training import calibrate, write_model


class Command(BtsCommand):
    help = 'Fit the CSP bank and one-vs-rest SVMs on the calibration split and write a model file'
    out_help = 'Model file to write (JSON)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('dataset', help='Dataset file (.btse)')
        parser.add_argument('--n-train', type=int, help='Calibration trials per class')
        parser.add_argument('--n-test', type=int, help='Pseudo-online test trials per class')
        parser.add_argument('--svm-c', type=float, help='SVM box constraint C')
        parser.add_argument('--shuffle-labels', action='store_true',
                            help='Train on randomly permuted labels (chance-level control)')

    def handle(self, *args, **options):
        out = self.require(options, 'out')
        config, split = load_pipeline_config(
            options['config'],
            rng_seed=options['seed'],
            svm_c=options['svm_c'],
            n_train=options['n_train'],
            n_test=options['n_test'],
        )
        vocabulary = Vocabulary.from_option(options['classes'])

        recording = read_dataset(options['dataset'])
        calibration = calibrate(
            recording, config, split, vocabulary,
            shuffle_labels=options['shuffle_labels'],
            dataset_sha256=file_sha256(options['dataset']),
        )
        write_model(calibration.model, out)

        self.stdout.write(f'Trained {len(vocabulary)}-class model on {len(calibration.train)} trials '
                          f'({len(calibration.test)} held out), seed {config.rng_seed}')
        width = max(len(label) for label in vocabulary.labels)
        for label, count in calibration.train_counts.items():
            self.stdout.write(f'  {label:<{width}}  {count}')
        if not calibration.model.classifier.converged:
            self.stdout.write(self.style.WARNING('Some SVMs stopped at svm_max_iter before converging'))
        self.success(f'Model written to {out}')
