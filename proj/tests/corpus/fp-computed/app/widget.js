var store = { saved: false, data: [1] };
var actions = {};

actions.saveDraft = function saveDraft() {
  store.saved = true;
};

actions.purge = function purge() {
  store.data = [];
};

function runAction(name) {
  return actions[name] ? actions[name]() : null;
}

function legacyExport() {
  return JSON.stringify(store);
}

function legacyImport(text) {
  store = JSON.parse(text);
}

document.addEventListener('click', function () {
  runAction('saveDraft');
});
