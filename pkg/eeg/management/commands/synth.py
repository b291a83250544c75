"""
Generate a synthetic session: dataset file plus ground-truth manifest.
"""
from eeg.config import load_pipeline_config, load_synth_spec
from eeg.io import file_sha256, manifest_path_for, write_dataset, write_json
from eeg.management.base import BtsCommand
from eeg.types import Vocabulary
from eeg.synth import generate_session
from monitoring.metrics import PipelineMetrics


class Command(BtsCommand):
    help = 'Generate a seeded synthetic EEG session (.btse) and its manifest'
    out_help = 'Dataset file to write (manifest goes next to it)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('specfile', nargs='?', help='Optional synth spec file (same grammar as --config)')
        parser.add_argument('--snr', type=float, help='Source-to-noise amplitude ratio')
        parser.add_argument('--channels', type=int, help='Number of channels')
        parser.add_argument('--fs', type=float, help='Sampling rate in Hz')
        parser.add_argument('--trials-per-class', type=int, help='Trials per class')

    def handle(self, *args, **options):
        out = self.require(options, 'out')
        labels = None
        if options['classes']:
            labels = Vocabulary.from_option(options['classes']).labels

        spec = load_synth_spec(
            options['specfile'] or options['config'],
            labels=labels,
            rng_seed=options['seed'],
            snr=options['snr'],
            channels=options['channels'],
            fs=options['fs'],
            trials_per_class=options['trials_per_class'],
        )
        # pipeline windows, hops and onset frames must be whole samples at spec.fs
        config, _ = load_pipeline_config(options['specfile'] or options['config'])
        config.validate_for_fs(spec.fs)

        recording, manifest = generate_session(spec)

        write_dataset(recording, out)
        manifest_data = manifest.to_dict()
        manifest_data['dataset_sha256'] = file_sha256(out)
        manifest_path = write_json(manifest_data, manifest_path_for(out))
        PipelineMetrics.log_session_generated(spec, recording, out)

        self.success(
            f'Wrote {out} ({recording.n_channels} channels, {recording.duration_ms / 1000:.1f} s, '
            f'{len(recording.annotations)} trials, snr {spec.snr:g}, seed {spec.rng_seed})'
        )
        self.stdout.write(f'Manifest: {manifest_path}')
