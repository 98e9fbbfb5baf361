from django.conf import settings

from apps.experiments.bases import ExperimentCommand, resolve_config, write_run_config
from apps.experiments.datasets import add_dataset_arguments, load_dataset
from apps.graphs.export import write_edge_list
from apps.graphs.weights import build_graph


class Command(ExperimentCommand):
    help = 'Build the kNN weight graph of the training points and write it as an edge list'
    command_name = 'graph_dump'

    def add_experiment_arguments(self, parser):
        add_dataset_arguments(parser, n_train=400, n_test=1)
        parser.add_argument('--config', help='key=value file with k, r, method')
        parser.add_argument('--k', type=int, help='Neighbours per point')
        parser.add_argument('--r', type=int, help='Neighbour rank whose distance sets sigma')
        parser.add_argument('--method', choices=['auto', 'brute', 'tree'], help='Exact kNN strategy')

    def run(self, options, out_dir):
        defaults = {'k': settings.WNLL_KNN_K, 'r': settings.WNLL_SIGMA_RANK, 'method': 'auto'}
        resolved = resolve_config(defaults, options.get('config'), {key: options.get(key) for key in defaults})
        data = load_dataset(options, options['seed'])
        write_run_config(out_dir, self.command_name, {**resolved, 'dataset': options['dataset'],
                                                      'n_train': options['n_train'], 'seed': options['seed']})

        graph = build_graph(data.train_X, int(resolved['k']), int(resolved['r']), method=resolved['method'])
        edges = write_edge_list(graph, out_dir / 'edges.csv')
        return f"{edges} edges over {graph.n} points (k={graph.k}, r={graph.r})"
