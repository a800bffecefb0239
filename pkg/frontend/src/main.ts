// Browser entry point: upload a CSV, then explore its recommendations.

import { Api } from './api';
import { mountApp } from './app';

const api = new Api('');

const root = document.getElementById('app');
if (!root) throw new Error('missing #app mount point');

const form = document.createElement('form');
form.className = 'upload-form';
const input = document.createElement('input');
input.type = 'file';
input.accept = '.csv,text/csv';
const button = document.createElement('button');
button.type = 'submit';
button.textContent = 'Analyze CSV';
form.append(input, button);
root.before(form);

form.addEventListener('submit', (ev) => {
  ev.preventDefault();
  const file = input.files?.[0];
  if (!file) return;
  void api.uploadDataset(file, file.name).then((result) => {
    mountApp({ api, datasetId: result.dataset_id, root });
  });
});
