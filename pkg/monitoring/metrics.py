"""
Pipeline metrics tracking for BTS observability
"""
import logging

metrics_logger = logging.getLogger('bts.metrics')


class PipelineMetrics:
    """Utility class for emitting structured pipeline events"""

    @staticmethod
    def log_session_generated(spec, recording, path):
        """Log a synthetic session with its ground-truth parameters"""
        metrics_logger.info("Synthetic session generated", extra={
            'event_type': 'session_generated',
            'path': str(path),
            'n_classes': len(spec.labels),
            'channels': recording.n_channels,
            'fs': recording.fs,
            'duration_s': round(recording.duration_ms / 1000, 3),
            'trials': len(recording.annotations),
            'snr': spec.snr,
            'seed': spec.rng_seed,
        })

    @staticmethod
    def log_calibration_completed(model, train_counts):
        """Log calibration with per-class trial counts"""
        metrics_logger.info("Calibration completed", extra={
            'event_type': 'calibration_completed',
            'n_classes': len(model.vocabulary),
            'feature_dim': model.bank.feature_dim,
            'train_trials': sum(train_counts.values()),
            'train_counts': train_counts,
            'train_windows': model.metadata.get('n_train_windows'),
            'converged': model.classifier.converged,
            'shuffle_labels': model.metadata.get('shuffle_labels', False),
            'seed': model.metadata.get('seed'),
        })

    @staticmethod
    def log_svm_not_converged(class_index, machine):
        metrics_logger.warning("SVM did not converge", extra={
            'event_type': 'svm_not_converged',
            'class_index': class_index,
            'passes': machine.n_passes,
            'tol': machine.tol,
        })

    @staticmethod
    def log_command_emitted(event, vocabulary):
        """Log one decoded command (the stand-in for audible output)"""
        metrics_logger.info("Command emitted", extra={
            'event_type': 'command_emitted',
            't_ms': event.end_ms,
            'command': vocabulary.label(event.command),
            'votes': len(event.votes),
            'tie_broken': event.tie_broken,
            'correct': event.correct if event.truth is not None else None,
        })

    @staticmethod
    def log_onsets_detected(onsets_ms, duration_ms):
        metrics_logger.info("Onsets detected", extra={
            'event_type': 'onsets_detected',
            'count': len(onsets_ms),
            'per_minute': round(len(onsets_ms) * 60_000 / duration_ms, 3) if duration_ms else None,
        })

    @staticmethod
    def log_evaluation_completed(report):
        """Log pseudo-online evaluation results"""
        metrics_logger.info("Evaluation completed", extra={
            'event_type': 'evaluation_completed',
            'n_classes': report['n_classes'],
            'n_events': report['n_events'],
            'accuracy': report['accuracy'],
            'chance_level': report['chance_level'],
            'n_ties': report['n_ties'],
            'above_chance': report['accuracy'] is not None and report['accuracy'] > report['chance_level'],
            'seed': report['seed'],
        })
