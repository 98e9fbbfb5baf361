import csv

from decouple import Csv

from apps.experiments.bases import ExperimentCommand, write_run_config
from apps.experiments.exceptions import RunConfigError
from apps.sampling.coverage import expected_samples, recommend_template_size, simulate_coverage
from custom_tools.logger import custom_logger

COLUMNS = ('N', 'exact', 'asymptotic', 'simulated', 'stderr')


class Command(ExperimentCommand):
    help = 'Expected draws to see every class: closed form against Monte-Carlo simulation'
    command_name = 'coupon'

    def add_experiment_arguments(self, parser):
        parser.add_argument('--n', default='2,5,10,26', help='Comma list of class counts')
        parser.add_argument('--trials', type=int, default=100000, help='Monte-Carlo trials per class count')
        parser.add_argument('--probabilities', help='Comma list of class probabilities (single N only)')
        parser.add_argument('--safety-factor', type=float, default=1.0,
                            help='Factor for the recommended template size')
        parser.add_argument('--max-relative-error', type=float,
                            help='Exit 1 when a simulated mean is further than this from the closed form')

    def run(self, options, out_dir):
        try:
            counts = Csv(cast=int)(options['n'])
            probabilities = Csv(cast=float)(options['probabilities']) if options.get('probabilities') else None
        except ValueError as exc:
            raise RunConfigError(f"bad number list: {exc}") from None
        if probabilities is not None and len(counts) != 1:
            raise RunConfigError("--probabilities needs exactly one class count in --n")

        write_run_config(out_dir, self.command_name, {
            'n': ','.join(map(str, counts)), 'trials': options['trials'], 'seed': options['seed'],
            'probabilities': options.get('probabilities') or '', 'safety_factor': options['safety_factor'],
        })

        rows, worst = [], 0.0
        for n_classes in counts:
            estimate = expected_samples(n_classes)
            simulation = simulate_coverage(n_classes, options['trials'], options['seed'], probabilities)
            worst = max(worst, abs(simulation.mean - estimate.expected_total) / estimate.expected_total)
            rows.append([n_classes, f"{estimate.expected_total:.6f}", f"{estimate.asymptotic:.6f}",
                         f"{simulation.mean:.6f}", f"{simulation.stderr:.6f}"])
            custom_logger(f"N={n_classes}: exact {estimate.expected_total:.4f}, simulated {simulation.mean:.4f}, "
                          f"recommended template {recommend_template_size(n_classes, options['safety_factor'])}")

        with open(out_dir / 'coupon.csv', 'w', newline='', encoding='utf-8') as stream:
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(COLUMNS)
            writer.writerows(rows)

        limit = options.get('max_relative_error')
        if limit is not None and probabilities is None and worst > limit:
            self.fail_acceptance(f"simulated mean deviates by {100 * worst:.2f}% from the closed form")
        return f"{len(rows)} class counts, worst relative deviation {100 * worst:.3f}%"
